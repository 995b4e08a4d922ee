#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graspsynth/config.hpp"
#include "graspsynth/error.hpp"
#include "graspsynth/eval.hpp"
#include "graspsynth/io.hpp"

namespace py = pybind11;
using namespace graspsynth;

namespace {

using PoseArray = std::array<double, 7>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Pose to_pose(const PoseArray& a) { return pose_from_array(a); }

Quat to_quat(const std::array<double, 4>& q) { return Quat::from_coeffs(q[0], q[1], q[2], q[3]); }

std::array<double, 4> from_quat(const Quat& q) { return {q.v.x(), q.v.y(), q.v.z(), q.w}; }

// Samples are rows on the Python side and columns in the library.
DataMatrix to_columns(const RowMatrix& rows) { return rows.transpose(); }

py::dict frames_to_py(const AugmentedCloud& o) {
    RowMatrix frames(static_cast<Eigen::Index>(o.size()), 7);
    RowMatrix features(static_cast<Eigen::Index>(o.size()), 2);
    for (std::size_t i = 0; i < o.size(); ++i) {
        const auto a = pose_to_array(o.items[i].v);
        for (int k = 0; k < 7; ++k) frames(static_cast<Eigen::Index>(i), k) = a[static_cast<std::size_t>(k)];
        features.row(static_cast<Eigen::Index>(i)) = o.items[i].r.transpose();
    }
    py::dict d;
    d["frames"] = frames;
    d["features"] = features;
    return d;
}

struct Demo {
    Demonstration demo = make_box_demo();
    GripperModel gripper = default_gripper();
};

const Demo& demo() {
    static const Demo d;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Learned grasp synthesis from a single demonstration";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error;
            py::object instance = exc(std::string(to_string(e.kind())) + ": " + e.what());
            instance.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    m.def("quat_log", [](const std::array<double, 4>& q) {
        const RotVec v = quat_log(to_quat(q));
        return std::array<double, 3>{v.omega.x(), v.omega.y(), v.omega.z()};
    }, py::arg("q"), "Rotation vector of a unit quaternion [x, y, z, w].");
    m.def("quat_exp", [](const std::array<double, 3>& v) {
        return from_quat(quat_exp(RotVec{Eigen::Vector3d(v[0], v[1], v[2])}));
    }, py::arg("v"));
    m.def("pose_compose", [](const PoseArray& a, const PoseArray& b) { return pose_to_array(to_pose(a) * to_pose(b)); },
          py::arg("a"), py::arg("b"), "Poses are [px, py, pz, qx, qy, qz, qw].");
    m.def("pose_inverse", [](const PoseArray& a) { return pose_to_array(pose_inverse(to_pose(a))); }, py::arg("a"));
    m.def("pose_transform", [](const PoseArray& a, const Eigen::Vector3d& x) { return Eigen::Vector3d(to_pose(a).transform(x)); },
          py::arg("pose"), py::arg("x"));

    py::class_<GaussianMixture>(m, "GaussianMixture")
        .def(py::init<std::vector<double>, std::vector<Eigen::VectorXd>, std::vector<Eigen::MatrixXd>>(),
             py::arg("weights"), py::arg("means"), py::arg("covariances"))
        .def_property_readonly("components", &GaussianMixture::components)
        .def_property_readonly("dim", &GaussianMixture::dim)
        .def_property_readonly("weights", &GaussianMixture::weights)
        .def("mean", &GaussianMixture::mean, py::arg("j"))
        .def("covariance", &GaussianMixture::covariance, py::arg("j"))
        .def("log_likelihood", [](const GaussianMixture& g, const Eigen::VectorXd& x) { return g.log_likelihood(x); })
        .def("sample", [](const GaussianMixture& g, std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            RowMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g.dim()));
            for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) = g.sample(rng).transpose();
            return out;
        }, py::arg("n"), py::arg("seed") = 0)
        .def("condition", [](const GaussianMixture& g, std::vector<std::size_t> u_dims, std::vector<std::size_t> r_dims,
                             const Eigen::VectorXd& r) { return gmm_condition(g, {std::move(u_dims), std::move(r_dims)}, r); },
             py::arg("u_dims"), py::arg("r_dims"), py::arg("r"))
        .def("marginalize", [](const GaussianMixture& g, std::vector<std::size_t> dims) { return gmm_marginalize(g, dims); },
             py::arg("dims"))
        .def("to_json", [](const GaussianMixture& g) { return mixture_to_json(g).dump(); })
        .def_static("from_json", [](const std::string& s) { return mixture_from_json(nlohmann::json::parse(s)); });

    m.def("em_fit", [](const RowMatrix& data, std::vector<double> weights, std::size_t components, std::uint64_t seed,
                       int max_iter, double tol) {
        EmOptions o;
        o.seed = seed;
        o.max_iter = max_iter;
        o.tol = tol;
        const EmReport r = em_fit_report(to_columns(data), weights, components, o);
        return py::make_tuple(r.model, r.log_likelihood);
    }, py::arg("data"), py::arg("weights") = std::vector<double>{}, py::arg("components") = 1, py::arg("seed") = 0,
       py::arg("max_iter") = 200, py::arg("tol") = 1e-6,
       "Weighted EM on samples stored one per row; returns (mixture, log-likelihood trace).");

    m.def("paired_t_test", [](std::vector<double> a, std::vector<double> b) {
        const TTestResult r = paired_t_test(a, b);
        py::dict d;
        d["t"] = r.t;
        d["df"] = r.df;
        d["p"] = r.p_two_tailed;
        d["mean_diff"] = r.mean_diff;
        return d;
    }, py::arg("a"), py::arg("b"));

    m.def("estimate_frames", [](const RowMatrix& points, double radius, std::optional<Eigen::Vector3d> viewpoint) {
        if (points.cols() != 3) fail(ErrorKind::InvalidArgument, "points must have 3 columns");
        PointCloud c;
        for (Eigen::Index i = 0; i < points.rows(); ++i) c.points.emplace_back(points(i, 0), points(i, 1), points(i, 2));
        if (viewpoint) {
            c.sensor_origins.push_back(*viewpoint);
            c.viewpoint.assign(c.points.size(), 0);
        }
        return frames_to_py(estimate_frames(c, radius));
    }, py::arg("points"), py::arg("radius") = kDefaultCurvatureRadius, py::arg("viewpoint") = std::nullopt,
       "Returns {'frames': (N,7) poses, 'features': (N,2) curvatures in 1/m}.");

    m.def("apply_noise", [](const RowMatrix& depth, double fx, double fy, double sigma_p, double sigma_d,
                            std::uint64_t seed) {
        DepthImage img;
        img.intrinsics.width = static_cast<int>(depth.cols());
        img.intrinsics.height = static_cast<int>(depth.rows());
        img.intrinsics.fx = fx;
        img.intrinsics.fy = fy;
        img.intrinsics.cx = 0.5 * (static_cast<double>(depth.cols()) - 1.0);
        img.intrinsics.cy = 0.5 * (static_cast<double>(depth.rows()) - 1.0);
        img.z.assign(depth.data(), depth.data() + depth.size());
        const DepthImage out = apply_noise(img, sigma_p, sigma_d, seed);
        return RowMatrix(Eigen::Map<const RowMatrix>(out.z.data(), depth.rows(), depth.cols()));
    }, py::arg("depth"), py::arg("fx") = 400.0, py::arg("fy") = 400.0, py::arg("sigma_p") = 1.0,
       py::arg("sigma_d") = 0.001, py::arg("seed") = 0);

    m.def("default_config", [] { return config_to_text(PipelineConfig{}); });

    m.def("demo_cloud", [] { return frames_to_py(demo().demo.cloud); },
          "Augmented cloud of the built-in 5 x 6 x 10 cm demonstration box.");
    m.def("learn_demo", [](const std::string& config) {
        const PipelineConfig c = parse_config(config);
        const LearnResult r = learn_from_demonstration(demo().demo.cloud, demo().demo.snapshot, demo().gripper,
                                                       c.learn_options());
        return py::make_tuple(bundle_to_json(r.bundle).dump(), r.warnings);
    }, py::arg("config") = "", "Learns from the built-in box demonstration; returns (bundle JSON, warnings).");
    m.def("synthesize_demo", [](const std::string& bundle_json, const std::string& config) {
        const PipelineConfig c = parse_config(config);
        const ModelBundle b = bundle_from_json(nlohmann::json::parse(bundle_json));
        SynthesisResult r;
        {
            py::gil_scoped_release release;
            r = synthesize(b, demo().gripper, demo().demo.cloud, c.experts, c.synthesis_options());
        }
        const nlohmann::json provenance = {{"seed", c.seed}, {"bundle_hash", bundle_hash(b)},
                                           {"method", to_string(c.method)}};
        return grasps_to_json(r.ranked, provenance).dump();
    }, py::arg("bundle_json"), py::arg("config") = "",
       "Synthesizes grasps on the demonstration box; returns the ranked-grasp JSON document.");
}
