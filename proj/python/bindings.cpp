#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klim/atomic.hpp"
#include "klim/bicx.hpp"
#include "klim/cli.hpp"
#include "klim/error.hpp"
#include "klim/gprod.hpp"
#include "klim/limit.hpp"

namespace py = pybind11;
using namespace klim;

namespace {

using Terms = std::vector<std::pair<std::vector<ElementSet>, std::string>>;

std::string coeff(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Terms terms(const LimitChain& c)
{
    Terms out;
    for (const auto& [b, v] : c)
        out.emplace_back(b.members(), coeff(v));
    return out;
}

Terms terms(const ChainElement& c)
{
    Terms out;
    for (const auto& [s, v] : c) {
        std::vector<ElementSet> atoms;
        for (const Atom& a : s)
            atoms.push_back(a.elements());
        out.emplace_back(std::move(atoms), coeff(v));
    }
    return out;
}

AtomSet atom_set(int l, const std::vector<ElementSet>& sets)
{
    std::vector<Atom> atoms;
    for (const ElementSet& s : sets)
        atoms.emplace_back(s);
    return AtomSet(l, std::move(atoms));
}

template <class T>
std::optional<T> field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    return j[key].get<T>();
}

cli::Config config_from(const std::string& text)
{
    const nlohmann::json j = nlohmann::json::parse(text);
    cli::Config c;
    c.command = j.value("command", "");
    c.check = j.value("check", "");
    c.k = field<int>(j, "k");
    c.l = field<int>(j, "l");
    c.q = field<int>(j, "q");
    c.stage_k = field<int>(j, "stage_k");
    c.n = field<int>(j, "n");
    c.m = field<int>(j, "m");
    c.max_atoms = field<std::size_t>(j, "max_atoms");
    c.trials = field<std::size_t>(j, "trials");
    c.seed = j.value("seed", std::uint64_t{0});
    c.jobs = j.value("jobs", 1);
    c.op = j.value("op", "graded");
    c.lhs = j.value("lhs", "");
    c.rhs = j.value("rhs", "");
    return c;
}

} // namespace

PYBIND11_MODULE(_klim, m)
{
    m.doc() = "klim core bindings";
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
    py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);

    m.attr("__version__") = KLIM_VERSION;

    m.def(
        "betti",
        [](int k, int l, std::optional<std::size_t> max_atoms, int jobs) {
            BuildOptions o;
            o.max_atoms = max_atoms;
            BettiTable t;
            {
                py::gil_scoped_release nogil;
                t = betti(k, l, o, jobs);
            }
            return std::make_pair(t.by_degree, std::vector<int>(t.indeterminate.begin(), t.indeterminate.end()));
        },
        py::arg("k"), py::arg("l"), py::arg("max_atoms") = py::none(), py::arg("jobs") = 1);

    m.def("degree", [](int l, const std::vector<ElementSet>& s) { return degree(atom_set(l, s)); });
    m.def("differential", [](int l, const std::vector<ElementSet>& s) { return terms(differential(atom_set(l, s))); });
    m.def("cup", [](int l, const std::vector<ElementSet>& s, const std::vector<ElementSet>& t) {
        return terms(cup(atom_set(l, s), atom_set(l, t)));
    });

    m.def("limit_d", [](const std::vector<ElementSet>& f) { return terms(limit_d(limit_index(f))); });
    m.def("delta", [](const std::vector<ElementSet>& f) { return terms(delta(limit_index(f))); });
    m.def("codegree", [](const std::vector<ElementSet>& f) { return codegree_limit(limit_index(f)); });
    m.def("gproduct", [](const std::vector<ElementSet>& a, const std::vector<ElementSet>& b) {
        return terms(gproduct(limit_index(a), limit_index(b)));
    });
    m.def("compatible", [](const std::vector<ElementSet>& a, const std::vector<ElementSet>& b) {
        const CompatPair p = compatible(limit_index(a), limit_index(b));
        return std::make_pair(p.compatible, to_string(p.reason));
    });

    m.def("execute", [](const std::string& config_json) {
        const cli::Config c = config_from(config_json);
        cli::Outcome o;
        {
            py::gil_scoped_release nogil;
            o = cli::execute(c);
        }
        return std::make_pair(cli::to_string(o.verdict), o.payload.dump());
    });

    m.def("run", [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"klim"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const std::string& a : full)
            argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
