// latsum_cli: exact and numeric special values of lattice sums over
// hyperplane arrangements, plus the verification suites.
//
//   latsum_cli eval --arrangement A.json --k 2,2,2 --y 0 [--mode numeric --precision 128]
//   latsum_cli reproduce-examples [--manifest PATH] [--only ID]
//   latsum_cli verify oracle    --arrangement A.json --k 2,2,2 --y 0 --N 250,500,1000,2000
//   latsum_cli verify polytope  --arrangement A.json --y 1/7,1/11 [--order 4]
//   latsum_cli verify hierarchy --arrangement A.json --remove f0 [--y 0] [--order 5]
//
// Exit codes: 0 ok, 1 input/output error, 2 excluded point, 3 internal
// holomorphy failure, 4 verification failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "latsum/genfun.hpp"
#include "latsum/hierarchy.hpp"
#include "latsum/io.hpp"
#include "latsum/oracle.hpp"
#include "latsum/polytope.hpp"

using namespace latsum;

namespace {

enum Exit { kOk = 0, kIo = 1, kExcluded = 2, kHolomorphy = 3, kVerify = 4 };

struct Job {
    std::string arrangement, k, y, mode = "exact", out, format = "json", route = "directional", edges = "both";
    std::string N = "250,500,1000,2000", remove, manifest, only, table = "csv";
    int precision = 128, order = -1, threads = 1;
    double tol = 1e-3;
    bool omit_timing = false;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const Job& job, const std::string& text) {
    if (job.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream o(job.out);
    if (!o) throw std::ios_base::failure("cannot write " + job.out);
    o << text;
}

std::string csv_quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
}

QVec target_y(const Job& job, const Arrangement& a) {
    if (job.y.empty()) return QVec(a.rank(), Q(0));
    QVec y = parse_rational_list(job.y);
    if (static_cast<int>(y.size()) != a.rank()) throw InvalidInput("--y needs " + std::to_string(a.rank()) + " entries");
    return y;
}

Weights target_k(const Job& job, const Arrangement& a) {
    if (job.k.empty()) throw InvalidInput("--k is required");
    Weights k = parse_int_list(job.k);
    if (static_cast<int>(k.size()) != a.size()) throw InvalidInput("--k needs " + std::to_string(a.size()) + " entries");
    return k;
}

Route parse_route(const std::string& s) {
    if (s == "directional") return Route::Directional;
    if (s == "series") return Route::Series;
    throw InvalidInput("unknown route '" + s + "'");
}

// ------------------------------------------------------------------ eval

template <class F>
ResultRecord evaluate(const F& fd, const Arrangement& a, const QVec& y, const Weights& k, const Job& job) {
    GenfunOptions opt;
    opt.threads = job.threads;
    EvaluationReport rep;
    auto t0 = Clock::now();
    typename F::Scalar C;
    auto S = lattice_sum_value(fd, a, y, k, parse_route(job.route), opt, &rep, &C);
    ResultRecord r;
    r.timing_ms = job.omit_timing ? 0 : ms_since(t0);
    r.S = to_string(S);
    r.C = to_string(C);
    r.mode = job.mode;
    r.order = rep.series_order;
    r.N_cyclotomic = cyclotomic_order(a, y);
    r.extra["k"] = k;
    json yj = json::array();
    for (auto& q : y) yj.push_back(q.get_str());
    r.extra["y"] = yj;
    r.extra["bases"] = rep.basis_count;
    r.extra["degenerate_divisions"] = rep.degenerate_divisions;
    if constexpr (F::exact) r.extra["S_numeric"] = S.embed(job.precision).str(30);
    return r;
}

int cmd_eval(const Job& job) {
    Arrangement a = load_arrangement(job.arrangement);
    QVec y = target_y(job, a);
    Weights k = target_k(job, a);
    ResultRecord r;
    if (job.mode == "exact")
        r = evaluate(exact_field_for(a, y), a, y, k, job);
    else if (job.mode == "numeric")
        r = evaluate(NumericField{job.precision}, a, y, k, job);
    else
        throw InvalidInput("--mode must be exact or numeric");
    if (job.format == "csv") {
        std::ostringstream s;
        s << "S,C,mode,order,N_cyclotomic,timing_ms\n"
          << csv_quote(r.S) << ',' << csv_quote(r.C) << ',' << r.mode << ',' << r.order << ',' << r.N_cyclotomic << ','
          << r.timing_ms << '\n';
        emit(job, s.str());
    } else {
        emit(job, to_json(r).dump(2) + "\n");
    }
    return kOk;
}

// ------------------------------------------------------ reproduce-examples

std::string manifest_path(const Job& job) {
    if (!job.manifest.empty()) return job.manifest;
    return std::string(LATSUM_DATA_DIR) + "/fixtures/manifest.json";
}

int cmd_reproduce(const Job& job) {
    const std::string path = manifest_path(job);
    json m = read_json_file(path);
    const auto dir = std::filesystem::path(path).parent_path();
    int fails = 0, rows = 0;
    std::printf("%-18s %-6s %10s  %s\n", "id", "result", "ms", "value");
    for (auto& e : m.at("entries")) {
        std::string id = e.at("id").get<std::string>();
        if (!job.only.empty() && id.find(job.only) == std::string::npos) continue;
        ++rows;
        Arrangement a = load_arrangement((dir / e.at("arrangement").get<std::string>()).string());
        Weights k = e.at("k").get<Weights>();
        QVec y;
        for (auto& s : e.at("y")) y.push_back(parse_q(s.get<std::string>()));
        ExactScalar want = parse_scalar(e.at("expected").get<std::string>());
        auto fd = exact_field_for(a, y);
        GenfunOptions opt;
        opt.threads = job.threads;
        auto t0 = Clock::now();
        std::string got_s;
        bool ok = false;
        try {
            ExactScalar got = lattice_sum_value(fd, a, y, k, Route::Directional, opt);
            if (e.value("quantity", "S") == "zeta") got = zeta_from_S(fd, a, k, got, e.at("symmetry").get<int>());
            ok = got == want;
            got_s = got.str();
        } catch (const Error& err) {
            got_s = std::string("error: ") + err.what();
        }
        fails += !ok;
        std::printf("%-18s %-6s %10.1f  %s\n", id.c_str(), ok ? "PASS" : "FAIL", ms_since(t0), got_s.c_str());
        if (!ok) std::printf("%-18s %-6s %10s  %s\n", "", "want", "", want.str().c_str());
    }
    std::printf("%d/%d passed\n", rows - fails, rows);
    return fails ? kVerify : kOk;
}

// ------------------------------------------------------------------ verify

int verify_oracle(const Job& job) {
    Arrangement a = load_arrangement(job.arrangement);
    QVec y = target_y(job, a);
    Weights k = target_k(job, a);
    std::vector<long> Ns;
    for (int n : parse_int_list(job.N)) Ns.push_back(n);
    auto fd = exact_field_for(a, y);
    Complex target = lattice_sum_value(fd, a, y, k).embed(std::max(job.precision, 64));
    OracleOptions oo;
    oo.precision = job.precision > 64 ? job.precision : 64;
    auto rows = convergence_scan(a, k, y, Ns, target, oo);
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].error < rows[i - 1].error;
    bool ok = monotone && !rows.empty() && rows.back().error < job.tol;
    std::ostringstream s;
    if (job.table == "json") {
        json j = {{"target", target.str(20)}, {"monotone", monotone}, {"tolerance", job.tol}, {"pass", ok}};
        for (auto& r : rows)
            j["rows"].push_back({{"N", r.N}, {"Z", r.Z.str(20)}, {"error", r.error}, {"diff_next", r.diff_next}});
        s << j.dump(2) << "\n";
    } else {
        s << "N,re_Z,im_Z,error,diff_next\n" << std::setprecision(6);
        for (auto& r : rows)
            s << r.N << ',' << r.Z.re().str(20) << ',' << r.Z.im().str(20) << ',' << r.error << ','
              << r.diff_next << '\n';
    }
    emit(job, s.str());
    std::fprintf(stderr, "oracle: %s (final error %.3e, monotone %s)\n", ok ? "pass" : "FAIL",
                 rows.empty() ? 0.0 : rows.back().error, monotone ? "yes" : "no");
    return ok ? kOk : kVerify;
}

std::string discrepancy_line(double d, int mismatched, bool exact) {
    std::ostringstream s;
    if (exact && mismatched == 0)
        s << "max discrepancy: 0 (exact)";
    else
        s << "max discrepancy: " << std::setprecision(6) << d << (exact ? " (exact)" : " (numeric)") << ", "
          << mismatched << " mismatched coefficients";
    return s.str();
}

template <class F>
int polytope_with(const F& fd, const Arrangement& a, const QVec& y, const PolytopeGeometry& G, int K, const Job& job) {
    GenfunOptions gopt;
    gopt.threads = job.threads;
    auto ref = generating_function(fd, a, y, K, gopt);
    json j = {{"order", K}, {"cells", G.cells.size()}};
    double worst = 0;
    int mismatched = 0;
    double norm = 1;
    for (auto& [m, c] : ref.terms()) norm = std::max(norm, fd.magnitude(c));
    std::vector<std::pair<std::string, EdgeData>> routes;
    if (job.edges != "incidence") routes.push_back({"witness", EdgeData::Witness});
    if (job.edges != "witness") routes.push_back({"incidence", EdgeData::Incidence});
    for (auto& [name, e] : routes) {
        PolytopeOptions po;
        po.edges = e;
        po.threads = job.threads;
        PolytopeReport rep;
        auto t0 = Clock::now();
        auto Ft = genfun_via_polytopes(fd, G, K, po, &rep);
        auto d = (Ft - ref).truncated(K);
        int bad = 0;
        double dmax = 0;
        for (auto& [m, c] : d.terms()) {
            double x = fd.magnitude(c);
            dmax = std::max(dmax, x);
            bad += F::exact || x > std::ldexp(1.0, -static_cast<int>(job.precision / 2)) * norm;
        }
        worst = std::max(worst, dmax);
        mismatched += bad;
        j["routes"][name] = {{"vertices", rep.vertices},
                             {"all_simple", rep.all_simple},
                             {"identity_failures", rep.identity_failures},
                             {"degenerate_divisions", rep.degenerate_divisions},
                             {"mismatched", bad},
                             {"max_discrepancy", dmax},
                             {"ms", job.omit_timing ? 0.0 : ms_since(t0)}};
        mismatched += rep.identity_failures;
    }
    j["max_discrepancy"] = worst;
    j["exact"] = F::exact;
    j["pass"] = mismatched == 0;
    emit(job, j.dump(2) + "\n");
    std::printf("%s\n", discrepancy_line(worst, mismatched, F::exact).c_str());
    return mismatched == 0 ? kOk : kVerify;
}

int verify_polytope(const Job& job) {
    Arrangement a = load_arrangement(job.arrangement);
    QVec y = target_y(job, a);
    const int K = job.order < 0 ? 4 : job.order;
    if (in_h_R(y, a)) throw ExcludedPoint("y lies on a translate of a hyperplane spanned by a basis");
    auto G = polytope_geometry(a, y, 0, job.threads);
    if (job.mode == "numeric") return polytope_with(NumericField{job.precision}, a, y, G, K, job);
    if (job.mode != "exact") throw InvalidInput("--mode must be exact or numeric");
    return polytope_with(ExactField{lcm_u32(polytope_cyclotomic_order(G), cyclotomic_order(a, y))}, a, y, G, K, job);
}

template <class F>
int hierarchy_with(const F& fd, const Arrangement& a, const std::vector<int>& keep, const std::vector<int>& removed,
                   const QVec& y, int K, const Job& job) {
    HierarchyOptions ho;
    ho.removal_order = removed;
    auto t0 = Clock::now();
    auto rep = check_hierarchy(fd, a, keep, y, K, ho);
    json names = json::array();
    for (int g : rep.removed) names.push_back(a[g].name.empty() ? std::to_string(g) : a[g].name);
    json j = {{"removed", names},
              {"order", K},
              {"summands", rep.summands},
              {"vanished", rep.vanished},
              {"disagreements", rep.disagreements},
              {"mismatched", rep.mismatched},
              {"max_discrepancy", rep.max_discrepancy},
              {"exact", rep.exact},
              {"pass", rep.ok()},
              {"ms", job.omit_timing ? 0.0 : ms_since(t0)}};
    emit(job, j.dump(2) + "\n");
    std::printf("%s\n", discrepancy_line(rep.max_discrepancy, rep.mismatched + rep.disagreements, rep.exact).c_str());
    return rep.ok() ? kOk : kVerify;
}

int verify_hierarchy(const Job& job) {
    Arrangement a = load_arrangement(job.arrangement);
    QVec y = target_y(job, a);
    const int K = job.order < 0 ? 5 : job.order;
    if (job.remove.empty()) throw InvalidInput("--remove is required");
    std::vector<int> removed;
    std::stringstream ss(job.remove);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int hit = -1;
        for (int i = 0; i < a.size(); ++i)
            if (a[i].name == item || std::to_string(i) == item) hit = i;
        if (hit < 0) throw InvalidInput("no functional named '" + item + "'");
        removed.push_back(hit);
    }
    std::vector<int> keep;
    for (int i = 0; i < a.size(); ++i)
        if (std::find(removed.begin(), removed.end(), i) == removed.end()) keep.push_back(i);
    if (job.mode == "numeric") return hierarchy_with(NumericField{job.precision}, a, keep, removed, y, K, job);
    if (job.mode != "exact") throw InvalidInput("--mode must be exact or numeric");
    return hierarchy_with(exact_field_for(a, y), a, keep, removed, y, K, job);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Special values of lattice sums over hyperplane arrangements"};
    app.require_subcommand(1);
    Job job;

    auto common = [&](CLI::App* c, bool weights) {
        c->add_option("--arrangement", job.arrangement, "arrangement JSON file")->required();
        if (weights) c->add_option("--k", job.k, "weights, comma separated")->required();
        c->add_option("--y", job.y, "target point, comma separated rationals (default 0)");
        c->add_option("--mode", job.mode, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
        c->add_option("--precision", job.precision, "bits for numeric mode")->check(CLI::Range(53, 100000));
        c->add_option("--threads", job.threads, "worker threads")->check(CLI::Range(1, 256));
        c->add_option("--out", job.out, "write the result here instead of stdout");
        c->add_flag("--omit-timing", job.omit_timing, "report timings as 0 for byte-stable output");
    };

    auto* eval = app.add_subcommand("eval", "evaluate S(k,y) and C(k,y)");
    common(eval, true);
    eval->add_option("--format", job.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    eval->add_option("--route", job.route, "directional or series")->check(CLI::IsMember({"directional", "series"}));
    eval->add_option("--order", job.order, "ignored; the order is the weight total");

    auto* repro = app.add_subcommand("reproduce-examples", "evaluate the bundled examples against their expected values");
    repro->add_option("--manifest", job.manifest, "manifest JSON (default: bundled fixtures)");
    repro->add_option("--only", job.only, "run entries whose id contains this string");
    repro->add_option("--threads", job.threads, "worker threads")->check(CLI::Range(1, 256));

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->require_subcommand(1);
    auto* vor = verify->add_subcommand("oracle", "compare with truncated sums");
    common(vor, true);
    vor->add_option("--N", job.N, "box sizes, increasing");
    vor->add_option("--tol", job.tol, "bound on the error at the largest N");
    vor->add_option("--format", job.table, "csv or json")->check(CLI::IsMember({"json", "csv"}));
    auto* vpo = verify->add_subcommand("polytope", "compare the polytope reassembly with the generating function");
    common(vpo, false);
    vpo->add_option("--order", job.order, "series order (default 4)");
    vpo->add_option("--edges", job.edges, "witness, incidence or both")
        ->check(CLI::IsMember({"witness", "incidence", "both"}));
    auto* vhi = verify->add_subcommand("hierarchy", "check the removal operators");
    common(vhi, false);
    vhi->add_option("--order", job.order, "series order (default 5)");
    vhi->add_option("--remove", job.remove, "functionals to remove, by name or index")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kIo;
    }

    try {
        if (eval->parsed()) return cmd_eval(job);
        if (repro->parsed()) return cmd_reproduce(job);
        if (vor->parsed()) return verify_oracle(job);
        if (vpo->parsed()) return verify_polytope(job);
        if (vhi->parsed()) return verify_hierarchy(job);
    } catch (const ExcludedPoint& e) {
        std::cerr << "excluded point: " << e.what() << "\n";
        return kExcluded;
    } catch (const NotSimple& e) {
        std::cerr << "excluded point: " << e.what() << "\n";
        return kExcluded;
    } catch (const NonDivisible& e) {
        std::cerr << "holomorphy failure: " << e.what() << " (residual " << e.residual << ")\n";
        return kHolomorphy;
    } catch (const DegenerateExponent& e) {
        std::cerr << "holomorphy failure: " << e.what() << "\n";
        return kHolomorphy;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kIo;
}
