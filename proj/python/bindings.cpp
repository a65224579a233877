#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roundsearch/bounds.hpp"
#include "roundsearch/game.hpp"
#include "roundsearch/harness.hpp"
#include "roundsearch/knowledge.hpp"
#include "roundsearch/solver.hpp"
#include "roundsearch/transcript_io.hpp"

namespace py = pybind11;
using namespace roundsearch;

namespace {

// Structured results cross the boundary as JSON text; the package decodes them.
std::string bounds_json(int n, int d, int r) {
    const BoundsReport b = bounds_for({n, d, r});
    nlohmann::json j = {{"lower", b.lower},
                        {"upper", b.upper},
                        {"upper_algorithmic", b.upper_algorithmic},
                        {"lower_exceeds_upper", b.lower_exceeds_upper}};
    if (b.two_round) j["two_round"] = {b.two_round->first, b.two_round->second};
    return j.dump();
}

std::string play_json(int n, int d, int r, const std::string& questioner, const std::string& adversary,
                      std::uint64_t seed) {
    return to_json(play({n, d, r}, questioner, adversary, seed)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Round-limited search for excellent elements (C++ core).";

    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<GameFailure>(m, "GameFailure", PyExc_RuntimeError);

    m.def("ceil_root", &ceil_root, py::arg("x"), py::arg("r"));
    m.def("bounds_json", &bounds_json, py::arg("n"), py::arg("d"), py::arg("r"));
    m.def("play_json", &play_json, py::arg("n"), py::arg("d"), py::arg("r"), py::arg("questioner"),
          py::arg("adversary"), py::arg("seed") = 0);
    m.def(
        "solve",
        [](int n, int d, int r) {
            ExactSolver solver(solver_config_from_env());
            return solver.solve(n, d, r);
        },
        py::arg("n"), py::arg("d"), py::arg("r"));
    m.def(
        "forced_excellent",
        [](int n, const std::string& transcript) {
            Transcript t = parse_transcript(transcript);
            t.config.n = n;
            return forced_excellent(replay(t).back());
        },
        py::arg("n"), py::arg("transcript_json"));
    m.def(
        "sweep_csv",
        [](const std::vector<int>& ns, const std::vector<int>& ds, const std::vector<int>& rs,
           const std::vector<std::pair<std::string, std::string>>& pairs, std::uint64_t seed) {
            SweepSpec spec{ns, ds, rs, pairs, seed, SweepSpec::Format::csv};
            std::ostringstream os;
            write_sweep(spec, os);
            return os.str();
        },
        py::arg("ns"), py::arg("ds"), py::arg("rs"), py::arg("pairs"), py::arg("seed") = 0);
}
