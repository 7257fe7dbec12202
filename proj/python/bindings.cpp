#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ergo/backward_predictor.hpp"
#include "ergo/experiment_runner.hpp"
#include "ergo/forward_predictor.hpp"
#include "ergo/io.hpp"
#include "ergo/memory_inference.hpp"
#include "ergo/process_models.hpp"
#include "ergo/stoptime.hpp"

namespace py = pybind11;
using namespace ergo;

namespace {

using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

SymbolView as_view(const ByteArray& a) {
    if (a.ndim() != 1) throw InputError("paths must be one-dimensional");
    return SymbolView(a.data(), static_cast<std::size_t>(a.size()));
}

ByteArray to_array(const std::vector<Symbol>& v) {
    ByteArray out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

MemoryParams memory_params(double gamma, double beta, double epsilon) {
    MemoryParams p;
    p.gamma = gamma;
    p.beta = beta;
    p.epsilon = epsilon;
    p.validate();
    return p;
}

py::dict trace_dict(const StopTimeTrace& t) {
    py::dict d;
    d["times"] = t.times;
    d["increments"] = t.increments;
    d["estimates"] = t.estimates;
    d["truths"] = t.truths;
    d["truncated"] = t.truncated;
    return d;
}

py::tuple table_tuple(const CsvTable& t) { return py::make_tuple(t.columns, t.rows); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Estimators for stationary ergodic processes";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UnsupportedOracle>(m, "UnsupportedOracle", PyExc_NotImplementedError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<ProcessModel>(m, "ProcessModel")
        .def_property_readonly("kind", &ProcessModel::kind)
        .def_property_readonly("alphabet", [](const ProcessModel& p) { return p.alphabet().size; })
        .def_property_readonly("stationary", &ProcessModel::stationary)
        .def("to_json", [](const ProcessModel& p) { return model_to_json(p).dump(); });

    m.def("bernoulli", &make_bernoulli, py::arg("p_one"));
    m.def("flip_chain", &make_binary_flip_chain, py::arg("flip"));
    m.def("example1", &make_example1);
    m.def("geometric_renewal", &make_truncated_geometric_renewal, py::arg("q"), py::arg("max_gap"));
    m.def("model_from_json", [](const std::string& text) { return model_from_json(nlohmann::json::parse(text)); },
          py::arg("text"));

    m.def(
        "sample_path",
        [](const ProcessModel& model, std::size_t length, std::uint64_t seed) {
            return to_array(sample_path(model, length, seed).symbols());
        },
        py::arg("model"), py::arg("length"), py::arg("seed"));
    m.def(
        "true_conditional",
        [](const ProcessModel& model, const ByteArray& past) {
            validate_symbols(as_view(past), model.alphabet());
            return true_conditional_row(model, as_view(past));
        },
        py::arg("model"), py::arg("past"));
    m.def(
        "memory_length",
        [](const ProcessModel& model, const ByteArray& past) { return memory_length_oracle(model, as_view(past)); },
        py::arg("model"), py::arg("past"));
    m.def("entropy_rate", &entropy_rate, py::arg("model"));

    m.def(
        "predict_backward",
        [](const ByteArray& past, std::size_t t, int target) {
            const auto e = p_hat(as_view(past), t, static_cast<Symbol>(target));
            return py::make_tuple(e.kappa, e.p_hat);
        },
        py::arg("past"), py::arg("t"), py::arg("target") = 1);
    m.def(
        "predict_forward",
        [](const ByteArray& path, int alphabet, std::size_t n) {
            const auto e = forward_estimate(as_view(path), Alphabet{alphabet}, n, default_schedule(Alphabet{alphabet}));
            py::dict d;
            d["n"] = e.n;
            d["kappa"] = e.kappa;
            d["lambda"] = e.lambda;
            d["row"] = e.row;
            return d;
        },
        py::arg("path"), py::arg("alphabet"), py::arg("n"));
    m.def(
        "forward_series",
        [](const ByteArray& path, int alphabet) {
            ForwardPredictor pred(Alphabet{alphabet}, default_schedule(Alphabet{alphabet}));
            const SymbolView v = as_view(path);
            std::vector<double> out;
            out.reserve(v.size());
            for (Symbol x : v) out.push_back(pred.push(x).g(1));
            return out;
        },
        py::arg("path"), py::arg("alphabet") = 2);

    m.def(
        "stoptime",
        [](const ByteArray& path, const std::string& scheme, int target) {
            const Symbol s = static_cast<Symbol>(target);
            if (scheme == "morvai2000") return trace_dict(morvai2000(as_view(path), s));
            if (scheme == "mw03") return trace_dict(mw03(as_view(path), s));
            throw InputError("unknown scheme: " + scheme);
        },
        py::arg("path"), py::arg("scheme") = "mw03", py::arg("target") = 1);

    m.def(
        "ntest",
        [](const ByteArray& past, int alphabet, std::size_t n, const std::vector<int>& word, double gamma, double beta) {
            std::vector<Symbol> w(word.begin(), word.end());
            const MemoryParams p = memory_params(gamma, beta, 0.1);
            return py::make_tuple(delta_hat(as_view(past), alphabet, n, w, p), ntest(as_view(past), alphabet, n, w, p));
        },
        py::arg("past"), py::arg("alphabet"), py::arg("n"), py::arg("word"), py::arg("gamma") = 0.5,
        py::arg("beta") = 0.2);
    m.def(
        "chi",
        [](const ByteArray& past, int alphabet, std::size_t n, double gamma, double beta) {
            return chi_backward(as_view(past), alphabet, n, memory_params(gamma, beta, 0.1));
        },
        py::arg("past"), py::arg("alphabet"), py::arg("n"), py::arg("gamma") = 0.5, py::arg("beta") = 0.2);
    m.def(
        "forward_memory",
        [](const ByteArray& path, int alphabet, std::size_t n, double gamma, double beta, double epsilon) {
            const auto v = forward_scheme(as_view(path), alphabet, n, memory_params(gamma, beta, epsilon));
            py::dict d;
            d["n"] = v.n;
            d["in_n"] = v.in_n;
            d["theta"] = v.theta;
            d["kappa"] = v.kappa;
            d["rho"] = v.rho;
            d["qhat"] = v.qhat;
            return d;
        },
        py::arg("path"), py::arg("alphabet"), py::arg("n"), py::arg("gamma") = 0.5, py::arg("beta") = 0.2,
        py::arg("epsilon") = 0.1);
    m.def(
        "ordest",
        [](const ByteArray& path, int alphabet, std::size_t n, double gamma, double beta) {
            return ordest(as_view(path), alphabet, n, memory_params(gamma, beta, 0.1));
        },
        py::arg("path"), py::arg("alphabet"), py::arg("n"), py::arg("gamma") = 0.5, py::arg("beta") = 0.2);
    m.def(
        "markov_qhat",
        [](const ByteArray& path, int alphabet, std::size_t n, double gamma, double beta) {
            const auto v = markov_qhat(as_view(path), alphabet, n, memory_params(gamma, beta, 0.1));
            py::dict d;
            d["n"] = v.n;
            d["order"] = v.order;
            d["in_n"] = v.in_n;
            d["qhat"] = v.qhat;
            return d;
        },
        py::arg("path"), py::arg("alphabet"), py::arg("n"), py::arg("gamma") = 0.5, py::arg("beta") = 0.2);
    m.def(
        "fm",
        [](const ByteArray& path, int alphabet, const std::vector<double>& f, double gamma, double beta) {
            const auto t = fm_scheme(as_view(path), alphabet, f, memory_params(gamma, beta, 0.1));
            py::dict d;
            d["zetas"] = t.zetas;
            d["lambdas"] = t.lambdas;
            d["kappas"] = t.kappas;
            d["estimates"] = t.estimates;
            d["truncated"] = t.truncated;
            return d;
        },
        py::arg("path"), py::arg("alphabet"), py::arg("f"), py::arg("gamma") = 0.5, py::arg("beta") = 0.2);

    m.def(
        "run_experiment",
        [](const std::string& config, const std::string& base_dir) {
            const auto cfg = parse_experiment_config(nlohmann::json::parse(config), base_dir);
            TraceFile trace;
            {
                py::gil_scoped_release release;
                trace = run_experiment(cfg);
            }
            return py::make_tuple(trace.table.columns, trace.table.rows, trace.metadata.dump());
        },
        py::arg("config"), py::arg("base_dir") = "");
    m.def(
        "summarize",
        [](const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows,
           const std::vector<double>& quantiles) {
            CsvTable t;
            t.columns = columns;
            t.rows = rows;
            return table_tuple(summarize(t, quantiles));
        },
        py::arg("columns"), py::arg("rows"), py::arg("quantiles") = std::vector<double>{0.1, 0.5, 0.9});
    m.def(
        "to_csv",
        [](const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
            CsvTable t;
            t.columns = columns;
            t.rows = rows;
            return to_csv(t);
        },
        py::arg("columns"), py::arg("rows"));
}
