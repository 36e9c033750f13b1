#include <fstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cyclefactor/absorber.hpp"
#include "cyclefactor/chains.hpp"
#include "cyclefactor/embedder.hpp"
#include "cyclefactor/errors.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"
#include "cyclefactor/partition.hpp"
#include "cyclefactor/paths.hpp"
#include "cyclefactor/template_graph.hpp"

namespace py = pybind11;
using namespace cyclefactor;

namespace {

VertexSet to_set(int n, const std::vector<int>& ids) { return VertexSet::of(n, ids); }

RunConfig config_from(const std::string& mode) {
    return mode == "strict" ? RunConfig::strict_defaults() : RunConfig::practical_defaults();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "constructive 2-factor embedding in sparse pseudorandom graphs";

    py::register_exception<Error>(m, "PipelineError");

    py::class_<Graph>(m, "Graph")
        .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) {
                 return Graph::from_edges(n, edges);
             }),
             py::arg("n"), py::arg("edges"))
        .def_static("complete", &Graph::complete)
        .def_static("load", &Graph::load_edge_list_file)
        .def("save", &Graph::save_edge_list_file)
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("m", &Graph::edge_count)
        .def("has_edge", &Graph::has_edge)
        .def("degree", &Graph::degree)
        .def("neighbors", &Graph::neighbors)
        .def("check_invariants", &Graph::check_invariants);

    m.def("sample_gnp", &sample_gnp, py::arg("n"), py::arg("p"), py::arg("seed"));

    m.def(
        "edge_count_between",
        [](const Graph& g, const std::vector<int>& a, const std::vector<int>& b) {
            return edge_count_between(g, to_set(g.vertex_count(), a), to_set(g.vertex_count(), b));
        },
        py::arg("g"), py::arg("a"), py::arg("b"));

    py::class_<LambdaEstimate>(m, "LambdaEstimate")
        .def_readonly("value", &LambdaEstimate::value)
        .def_readonly("tolerance", &LambdaEstimate::tolerance)
        .def_readonly("iterations", &LambdaEstimate::iterations)
        .def_readonly("converged", &LambdaEstimate::converged)
        .def("__repr__", &LambdaEstimate::summary);
    m.def("estimate_lambda", &estimate_lambda, py::arg("g"), py::arg("p"),
          py::arg("max_iterations") = 10000, py::arg("tolerance") = 1e-9);

    py::class_<DiscrepancyReport>(m, "DiscrepancyReport")
        .def_readonly("max_ratio", &DiscrepancyReport::max_ratio)
        .def_readonly("trials", &DiscrepancyReport::trials);
    m.def(
        "check_discrepancy",
        [](const Graph& g, double p, double epsilon, double delta, int trials, uint64_t seed) {
            JumbledParams prm = JumbledParams::from_epsilon(p, epsilon, delta, g.vertex_count());
            return check_discrepancy(g, prm, trials, seed);
        },
        py::arg("g"), py::arg("p"), py::arg("epsilon"), py::arg("delta"), py::arg("trials"),
        py::arg("seed"));

    m.def("balanced_signs", [](const std::vector<std::vector<uint8_t>>& rows) {
        SignVector s = balanced_signs(rows);
        return std::vector<int>(s.begin(), s.end());
    });

    m.def(
        "degree_preserving_partition",
        [](const Graph& g, const std::vector<int>& u, const std::vector<int>& w, int k,
           double delta, double p, const std::string& mode) {
            auto dp = degree_preserving_partition(g, to_set(g.vertex_count(), u),
                                                  to_set(g.vertex_count(), w), k, delta, p,
                                                  config_from(mode));
            return dp.parts;
        },
        py::arg("g"), py::arg("u"), py::arg("w"), py::arg("k"), py::arg("delta"), py::arg("p"),
        py::arg("mode") = "practical");

    m.def(
        "find_connecting_path",
        [](const Graph& g, const std::vector<int>& a, const std::vector<int>& b,
           const std::vector<int>& c, int ell, double p, const std::string& mode) {
            int n = g.vertex_count();
            return find_connecting_path(g, to_set(n, a), to_set(n, b), to_set(n, c), ell, p,
                                        config_from(mode))
                .v;
        },
        py::arg("g"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("ell"), py::arg("p"),
        py::arg("mode") = "practical");

    m.def(
        "find_book_cycle",
        [](const Graph& g, const std::vector<int>& u, int ell, int k, double p,
           const std::string& mode) {
            BookCycle bc = find_book_cycle(g, to_set(g.vertex_count(), u), ell, k, p,
                                           config_from(mode));
            return std::make_pair(bc.spine.v, bc.pages);
        },
        py::arg("g"), py::arg("u"), py::arg("ell"), py::arg("k"), py::arg("p"),
        py::arg("mode") = "practical");

    m.def(
        "greedy_long_path",
        [](const Graph& g, const std::vector<int>& u, long long ell, double p,
           const std::string& mode) {
            return greedy_long_path(g, to_set(g.vertex_count(), u), ell, p, config_from(mode)).v;
        },
        py::arg("g"), py::arg("u"), py::arg("ell"), py::arg("p"), py::arg("mode") = "practical");

    m.def(
        "connect_pairs",
        [](const Graph& g, const std::vector<std::pair<int, int>>& pairs,
           const std::vector<int>& u, int ell, double delta_prime, double p,
           const std::string& mode) {
            PairSystem sys{pairs};
            auto out = connect_pairs(g, sys, to_set(g.vertex_count(), u), ell, delta_prime, p,
                                     config_from(mode));
            std::vector<std::vector<int>> res;
            for (auto& q : out) res.push_back(q.v);
            return res;
        },
        py::arg("g"), py::arg("pairs"), py::arg("u"), py::arg("ell"), py::arg("delta_prime"),
        py::arg("p"), py::arg("mode") = "practical");

    m.def("is_prime", &is_prime);
    m.def("legendre", &legendre);
    m.def(
        "find_template_prime",
        [](long long mm, uint64_t p_r, const std::string& mode) {
            auto tp = find_template_prime(mm, p_r, mode == "strict" ? Mode::strict : Mode::practical);
            return std::make_pair(tp.q, tp.widened);
        },
        py::arg("m"), py::arg("p_r"), py::arg("mode") = "practical");

    py::class_<RamanujanGraph>(m, "RamanujanGraph")
        .def_readonly("graph", &RamanujanGraph::graph)
        .def_readonly("p_r", &RamanujanGraph::p_r)
        .def_readonly("q", &RamanujanGraph::q)
        .def_readonly("degree", &RamanujanGraph::degree)
        .def_readonly("bipartite", &RamanujanGraph::bipartite);
    m.def("build_lps_graph", &build_lps_graph, py::arg("p_r"), py::arg("q"));
    m.def("bipartite_double_cover", &bipartite_double_cover);

    py::enum_<FlexVerification>(m, "FlexVerification")
        .value("unverified", FlexVerification::unverified)
        .value("sampled", FlexVerification::sampled)
        .value("exhaustive", FlexVerification::exhaustive);

    py::class_<Template>(m, "Template")
        .def_readonly("m", &Template::m)
        .def_readonly("max_degree", &Template::max_degree)
        .def_readonly("verified", &Template::verified)
        .def("edges", &Template::edges)
        .def("matching_avoiding", &Template::matching_avoiding)
        .def("save", &Template::save_file)
        .def_static("load", &Template::load_file);
    m.def(
        "build_template",
        [](long long mm, uint64_t p_r, const std::string& mode) {
            return build_template(mm, p_r, config_from(mode));
        },
        py::arg("m"), py::arg("p_r"), py::arg("mode") = "practical");
    m.def(
        "build_random_template",
        [](long long mm, int degree_target, uint64_t seed, const std::string& mode) {
            return build_random_template(mm, degree_target, seed, config_from(mode));
        },
        py::arg("m"), py::arg("degree_target"), py::arg("seed"), py::arg("mode") = "practical");

    m.def(
        "bipartite_matching",
        [](int left, int right, const std::vector<std::pair<int, int>>& edges,
           const std::vector<int>& u, const std::vector<int>& w) {
            BipartiteGraph b;
            b.left = left;
            b.right = right;
            b.adj.assign(size_t(left), {});
            for (auto [x, y] : edges) b.adj.at(size_t(x)).push_back(y);
            MatchingResult r = bipartite_matching(b, u, w);
            return std::make_pair(r.size, r.match_of_left);
        },
        py::arg("left"), py::arg("right"), py::arg("edges"), py::arg("u"), py::arg("w"));

    py::class_<CycleFamilySpec>(m, "CycleFamilySpec")
        .def(py::init([](const std::vector<long long>& lengths) {
                 return CycleFamilySpec{lengths};
             }),
             py::arg("lengths"))
        .def_readonly("lengths", &CycleFamilySpec::lengths)
        .def_property_readonly("total", &CycleFamilySpec::total);

    py::class_<Embedding>(m, "Embedding")
        .def_readonly("cycles", &Embedding::cycles)
        .def("save", [](const Embedding& e, const std::string& path) {
            std::ofstream out(path);
            e.save(out);
        });

    m.def(
        "verify_embedding",
        [](const Graph& g, const std::vector<long long>& lengths,
           const std::vector<std::vector<int>>& cycles) {
            VerifyReport r = verify_embedding(g, CycleFamilySpec{lengths}, Embedding{cycles});
            return std::make_pair(r.ok, r.reason);
        },
        py::arg("g"), py::arg("lengths"), py::arg("cycles"));

    m.def(
        "plan_segment_budget",
        [](const std::vector<long long>& lengths, long long r, long long v0, long long m_prime) {
            return plan_segment_budget(lengths, r, v0, m_prime).q;
        },
        py::arg("lengths"), py::arg("r"), py::arg("v0_count"), py::arg("m_prime"));

    auto embed_common = [](const Graph& g, const std::vector<long long>& lengths, double p,
                           const std::string& mode, int which, bool with_triangles) {
        RunConfig cfg = config_from(mode);
        JumbledParams prm = JumbledParams::from_epsilon(p, cfg.epsilon, cfg.delta, g.vertex_count());
        CycleFamilySpec spec{lengths};
        Embedding emb;
        if (which == 0)
            emb = embed_short_cycles(g, spec, prm, cfg);
        else if (which == 1)
            emb = embed_long_cycles(g, spec, prm, cfg);
        else {
            TriangleProvider provider;
            if (with_triangles)
                provider = [](const Graph& gg, const VertexSet& host) {
                    return brute_triangle_factor(gg, host);
                };
            emb = embed_two_factor(g, spec, prm, cfg, provider);
        }
        return emb.cycles;
    };
    m.def(
        "embed_short_cycles",
        [embed_common](const Graph& g, const std::vector<long long>& lengths, double p,
                       const std::string& mode) { return embed_common(g, lengths, p, mode, 0, false); },
        py::arg("g"), py::arg("lengths"), py::arg("p"), py::arg("mode") = "practical");
    m.def(
        "embed_long_cycles",
        [embed_common](const Graph& g, const std::vector<long long>& lengths, double p,
                       const std::string& mode) { return embed_common(g, lengths, p, mode, 1, false); },
        py::arg("g"), py::arg("lengths"), py::arg("p"), py::arg("mode") = "practical");
    m.def(
        "embed_two_factor",
        [embed_common](const Graph& g, const std::vector<long long>& lengths, double p,
                       const std::string& mode, bool triangles) {
            return embed_common(g, lengths, p, mode, 2, triangles);
        },
        py::arg("g"), py::arg("lengths"), py::arg("p"), py::arg("mode") = "practical",
        py::arg("triangles") = true);

    m.def("brute_triangle_factor", [](const Graph& g, const std::vector<int>& host) {
        return brute_triangle_factor(g, to_set(g.vertex_count(), host));
    });
}
