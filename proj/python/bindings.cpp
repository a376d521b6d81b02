#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "strictclust/engine.hpp"
#include "strictclust/similarity.hpp"
#include "strictclust/snapshot.hpp"

namespace py = pybind11;
using namespace strictclust;

namespace {

PYBIND11_CONSTINIT py::gil_safe_call_once_and_store<py::object> error_type;

// Stateful wrapper so Python callers never have to manage point seq numbers.
class Clusterer {
public:
    explicit Clusterer(const Config& config) : state_(config) {}
    explicit Clusterer(ClusterState state) : state_(std::move(state)) { audit(state_); }

    AssignmentOutcome assign(std::vector<double> features, std::optional<std::string> label) {
        DataPoint point = validate_point(std::move(features), state_.config, state_.points_seen);
        point.label = std::move(label);
        return strictclust::assign(state_, point);
    }

    const ClusterState& state() const { return state_; }

private:
    ClusterState state_;
};

DataPoint as_point(std::vector<double> features) {
    return DataPoint{0, std::move(features), std::nullopt};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Streaming clustering with a predefined level of similarity";

    error_type.call_once_and_store_result([&]() -> py::object {
        return py::exception<Error>(m, "StrictclustError", PyExc_ValueError);
    });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object type = error_type.get_stored();
            py::object inst = type(std::string(e.what()));
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    py::class_<Config>(m, "Config")
        .def_readonly("strictness", &Config::strictness)
        .def_readonly("n_features", &Config::n_features)
        .def("__eq__", [](const Config& a, const Config& b) { return a == b; })
        .def("__repr__", [](const Config& c) {
            return "Config(strictness=" + py::repr(py::float_(c.strictness)).cast<std::string>() +
                   ", n_features=" + std::to_string(c.n_features) + ")";
        });

    py::enum_<DecisionPath>(m, "DecisionPath")
        .value("EMPTY_LIST_NEW_CLUSTER", DecisionPath::EmptyListNewCluster)
        .value("SINGLE_QUALIFIED", DecisionPath::SingleQualified)
        .value("MAX_MATCHED", DecisionPath::MaxMatched)
        .value("AVG_TIEBREAK", DecisionPath::AvgTiebreak);

    py::class_<Cluster>(m, "Cluster")
        .def_property_readonly("id", &Cluster::id)
        .def_property_readonly("feature_sums", &Cluster::feature_sums)
        .def_property_readonly("sum_residuals", &Cluster::sum_residuals)
        .def_property_readonly("member_seqs", &Cluster::member_seqs)
        .def_property_readonly("member_count", &Cluster::member_count)
        .def_property_readonly("centroid", &Cluster::centroid);

    py::class_<ClusterState>(m, "ClusterState")
        .def_readonly("config", &ClusterState::config)
        .def_readonly("clusters", &ClusterState::clusters)
        .def_readonly("points_seen", &ClusterState::points_seen)
        .def("__eq__", [](const ClusterState& a, const ClusterState& b) { return a == b; });

    py::class_<MatchProfile>(m, "MatchProfile")
        .def_readonly("cluster_id", &MatchProfile::cluster_id)
        .def_readonly("matched_count", &MatchProfile::matched_count)
        .def_readonly("qualifying_avg", &MatchProfile::qualifying_avg);

    py::class_<AssignmentOutcome>(m, "AssignmentOutcome")
        .def_readonly("point_seq", &AssignmentOutcome::point_seq)
        .def_readonly("assigned_cluster_id", &AssignmentOutcome::assigned_cluster_id)
        .def_readonly("created_new", &AssignmentOutcome::created_new)
        .def_readonly("profiles", &AssignmentOutcome::profiles)
        .def_readonly("decision_path", &AssignmentOutcome::decision_path);

    py::class_<Clusterer>(m, "Clusterer")
        .def(py::init([](double strictness, std::size_t n_features) {
                 return Clusterer(validate_config(strictness, n_features));
             }),
             py::arg("strictness"), py::arg("n_features"))
        .def(py::init<ClusterState>(), py::arg("state"))
        .def("assign", &Clusterer::assign, py::arg("features"), py::arg("label") = py::none())
        .def_property_readonly("state", &Clusterer::state)
        .def_property_readonly("config", [](const Clusterer& c) { return c.state().config; })
        .def_property_readonly("clusters",
                               [](const Clusterer& c) { return c.state().clusters; })
        .def_property_readonly("points_seen",
                               [](const Clusterer& c) { return c.state().points_seen; });

    m.def("validate_config", &validate_config, py::arg("strictness"), py::arg("n_features"));
    m.def("feature_similarity", &feature_similarity, py::arg("value"), py::arg("centroid"));
    m.def(
        "qualifying_range",
        [](double strictness) {
            const auto r = qualifying_range(strictness);
            return py::make_tuple(r.lo, r.hi);
        },
        py::arg("strictness"));
    m.def("qualifies", &qualifies, py::arg("similarity"), py::arg("strictness"));
    m.def("scale_above_100", &scale_above_100, py::arg("similarity"));
    m.def("should_match_features", &should_match_features, py::arg("config"));
    m.def(
        "match_profile",
        [](std::vector<double> features, const Cluster& cluster, const Config& config) {
            if (features.size() != config.n_features) {
                throw Error(ErrorCode::DimensionMismatch, "point length differs from config");
            }
            return match_profile(as_point(std::move(features)), cluster, config);
        },
        py::arg("features"), py::arg("cluster"), py::arg("config"));
    m.def(
        "run_stream",
        [](double strictness, const std::vector<std::vector<double>>& rows,
           std::optional<std::size_t> n_features) {
            std::size_t n = n_features.value_or(rows.empty() ? 1 : rows.front().size());
            const Config config = validate_config(strictness, n);
            std::vector<DataPoint> points;
            points.reserve(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                points.push_back(validate_point(rows[i], config, i));
            }
            auto result = run_stream(config, points);
            return py::make_tuple(std::move(result.state), std::move(result.outcomes));
        },
        py::arg("strictness"), py::arg("rows"), py::arg("n_features") = py::none());
    m.def("audit", &audit, py::arg("state"));
    m.def("encode_snapshot", &encode_snapshot, py::arg("state"));
    m.def(
        "decode_snapshot", [](const std::string& text) { return decode_snapshot(text); },
        py::arg("text"));
    m.def("save_snapshot", &save_snapshot, py::arg("state"), py::arg("path"));
    m.def("load_snapshot", &load_snapshot, py::arg("path"));
}
