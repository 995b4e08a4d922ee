#include "graspsynth/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "graspsynth/error.hpp"

namespace graspsynth {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

[[noreturn]] void parse_error(const fs::path& path, std::size_t line, const std::string& what) {
    fail(ErrorKind::Io, path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

PointCloud read_ply(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() {
        if (!std::getline(in, line)) {
            parse_error(path, lineno, "unexpected end of file");
        }
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next();
    if (line != "ply") {
        parse_error(path, lineno, "missing 'ply' magic");
    }
    std::size_t vertices = 0;
    bool in_vertex = false;
    std::vector<std::string> props;
    while (true) {
        next();
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "format") {
            std::string kind;
            ss >> kind;
            if (kind != "ascii") {
                parse_error(path, lineno, "only ASCII PLY is supported");
            }
        } else if (tok == "element") {
            std::string name;
            std::size_t count = 0;
            ss >> name >> count;
            in_vertex = name == "vertex";
            if (in_vertex) vertices = count;
        } else if (tok == "property" && in_vertex) {
            std::string type, name;
            ss >> type >> name;
            if (type == "list") {
                parse_error(path, lineno, "list properties on vertices are not supported");
            }
            props.push_back(name);
        } else if (tok == "end_header") {
            break;
        }
    }
    int ix = -1, iy = -1, iz = -1;
    for (std::size_t k = 0; k < props.size(); ++k) {
        if (props[k] == "x") ix = static_cast<int>(k);
        if (props[k] == "y") iy = static_cast<int>(k);
        if (props[k] == "z") iz = static_cast<int>(k);
    }
    if (ix < 0 || iy < 0 || iz < 0) {
        parse_error(path, lineno, "vertex element lacks x, y, z properties");
    }
    PointCloud cloud;
    cloud.points.reserve(vertices);
    std::vector<double> vals(props.size());
    for (std::size_t i = 0; i < vertices; ++i) {
        next();
        std::istringstream ss(line);
        for (auto& v : vals) {
            if (!(ss >> v)) {
                parse_error(path, lineno, "malformed vertex line");
            }
        }
        const Eigen::Vector3d p(vals[static_cast<std::size_t>(ix)], vals[static_cast<std::size_t>(iy)],
                                vals[static_cast<std::size_t>(iz)]);
        if (!p.allFinite()) {
            parse_error(path, lineno, "non-finite coordinate");
        }
        cloud.points.push_back(p);
    }
    return cloud;
}

void write_ply(const fs::path& path, const PointCloud& cloud) {
    auto out = open_out(path);
    out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
        << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const auto& p : cloud.points) {
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    }
}

AugmentedCloud read_apc(const fs::path& path) {
    auto in = open_in(path);
    AugmentedCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        double v[9];
        for (double& x : v) {
            if (!(ss >> x)) {
                parse_error(path, lineno, "expected 9 numbers");
            }
            if (!std::isfinite(x)) {
                parse_error(path, lineno, "non-finite value");
            }
        }
        AugmentedPoint pt;
        pt.v.p = {v[0], v[1], v[2]};
        const double n = std::sqrt(v[3] * v[3] + v[4] * v[4] + v[5] * v[5] + v[6] * v[6]);
        if (std::abs(n - 1.0) > 1e-6) {
            parse_error(path, lineno, "orientation is not a unit quaternion");
        }
        pt.v.q = Quat::from_coeffs(v[3], v[4], v[5], v[6]);
        pt.r = {v[7], v[8]};
        cloud.items.push_back(pt);
    }
    if (cloud.empty()) {
        fail(ErrorKind::Io, "'" + path.string() + "' contains no points");
    }
    return cloud;
}

void write_apc(const fs::path& path, const AugmentedCloud& cloud) {
    auto out = open_out(path);
    for (const auto& it : cloud.items) {
        const auto a = pose_to_array(it.v);
        for (double x : a) out << format_double(x) << ' ';
        out << format_double(it.r.x()) << ' ' << format_double(it.r.y()) << '\n';
    }
}

PointCloud read_cloud(const fs::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".ply") {
        return read_ply(path);
    }
    if (ext == ".apc") {
        PointCloud cloud;
        for (const auto& it : read_apc(path).items) cloud.points.push_back(it.v.p);
        return cloud;
    }
    fail(ErrorKind::Io, "unrecognized cloud extension '" + ext + "' (expected .ply or .apc)");
}

DepthImage read_depth(const fs::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::string header;
    if (!std::getline(in, header)) {
        fail(ErrorKind::Io, "'" + path.string() + "': missing header");
    }
    std::istringstream ss(header);
    DepthImage img;
    double pose[7];
    ss >> img.intrinsics.width >> img.intrinsics.height >> img.intrinsics.fx >> img.intrinsics.fy >>
        img.intrinsics.cx >> img.intrinsics.cy;
    for (double& x : pose) ss >> x;
    if (!ss || img.intrinsics.width <= 0 || img.intrinsics.height <= 0) {
        fail(ErrorKind::Io, "'" + path.string() + "': malformed header");
    }
    img.camera = pose_from_array(pose);
    const std::size_t n = static_cast<std::size_t>(img.intrinsics.width) * static_cast<std::size_t>(img.intrinsics.height);
    img.z.resize(n);
    std::vector<char> raw(n * 8);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        fail(ErrorKind::Io, "'" + path.string() + "': truncated pixel data");
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(raw[i * 8 + static_cast<std::size_t>(b)]);
        img.z[i] = std::bit_cast<double>(bits);
    }
    return img;
}

void write_depth(const fs::path& path, const DepthImage& image) {
    auto out = open_out(path, std::ios::binary);
    const auto& k = image.intrinsics;
    out << k.width << ' ' << k.height << ' ' << format_double(k.fx) << ' ' << format_double(k.fy) << ' '
        << format_double(k.cx) << ' ' << format_double(k.cy);
    for (double x : pose_to_array(image.camera)) out << ' ' << format_double(x);
    out << '\n';
    std::vector<char> raw(image.z.size() * 8);
    for (std::size_t i = 0; i < image.z.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(image.z[i]);
        for (int b = 0; b < 8; ++b) {
            raw[i * 8 + static_cast<std::size_t>(b)] = static_cast<char>(bits & 0xff);
            bits >>= 8;
        }
    }
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

nlohmann::json read_json(const fs::path& path) {
    auto in = open_in(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Io, "'" + path.string() + "': " + e.what());
    }
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

std::string read_text(const fs::path& path) {
    auto in = open_in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

}  // namespace graspsynth
