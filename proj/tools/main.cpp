#include "tdesign/budget.hpp"
#include "tdesign/codes.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/errors.hpp"
#include "tdesign/gf.hpp"
#include "tdesign/io.hpp"
#include "tdesign/oa.hpp"
#include "tdesign/rational.hpp"
#include "tdesign/rules1d.hpp"
#include "tdesign/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace tdesign;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFail = 2;
constexpr int kExitBudget = 3;

/// Budget defaults, overridable through TDESIGN_* environment variables so
/// pipelines can loosen or tighten caps without new flags.
Budget budget_from_env() {
    Budget b;
    auto read = [](const char* name, std::uint64_t& slot) {
        if (const char* s = std::getenv(name)) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s, &end, 10);
            if (end == s || *end != '\0')
                throw std::invalid_argument(std::string("bad value for ") + name + ": " + s);
            slot = v;
        }
    };
    read("TDESIGN_MAX_ROWS", b.max_rows);
    read("TDESIGN_MAX_TUPLES", b.max_tuples);
    read("TDESIGN_MAX_SUBSETS", b.max_subsets);
    read("TDESIGN_MAX_GROUP", b.max_group);
    read("TDESIGN_SAMPLE_CAP", b.monomial_sample_cap);
    return b;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            throw std::overflow_error("grid size overflows 64 bits");
        r *= base;
    }
    return r;
}

void print_reduction(std::uint64_t points, std::uint64_t grid) {
    if (points != 0 && grid % points == 0)
        std::printf("points=%llu grid=%llu reduction=%llu\n",
                    static_cast<unsigned long long>(points),
                    static_cast<unsigned long long>(grid),
                    static_cast<unsigned long long>(grid / points));
    else
        std::printf("points=%llu grid=%llu\n", static_cast<unsigned long long>(points),
                    static_cast<unsigned long long>(grid));
}

/// Relative reference from the design file's directory to the array file,
/// so a saved design/array pair stays loadable after the directory moves.
std::string oa_reference(const fs::path& oa_path, const fs::path& design_path) {
    const fs::path base = fs::absolute(design_path).parent_path();
    const fs::path rel = fs::proximate(fs::absolute(oa_path), base);
    return rel.generic_string();
}

void print_verification(const verify::VerificationReport& rep) {
    std::printf("degree=%d monomials=%llu %s max_rel_err=%.3g max_abs_err=%.3g %s\n",
                rep.degree_checked, static_cast<unsigned long long>(rep.monomials_checked),
                rep.exhaustive ? "exhaustive" : "sampled", rep.max_rel_error,
                rep.max_abs_error, rep.passed ? "PASS" : "FAIL");
}

struct OaBuildArgs {
    std::int64_t q = 0;
    int m = 0;
    int t = 0;
    std::vector<std::size_t> columns;
    std::string out = "oa.json";
};

int run_oa_build(const OaBuildArgs& a, const Budget& budget, int threads) {
    codes::GeneratorMatrix g = codes::trace_code_generators(a.q, a.m, a.t);
    if (!a.columns.empty()) g = codes::puncture(g, a.columns);
    oa::OrthogonalArray array = oa::from_generator(std::move(g));
    oa::certify(array, a.t, budget, threads);

    const std::uint64_t lambda =
        array.runs / checked_pow(static_cast<std::uint64_t>(array.q),
                                 static_cast<unsigned>(a.t));
    std::printf("OA(N=%llu, k=%zu, q=%lld, t=%d) lambda=%llu certification=%s\n",
                static_cast<unsigned long long>(array.runs), array.k,
                static_cast<long long>(array.q), array.certified_strength,
                static_cast<unsigned long long>(lambda),
                oa::to_string(array.certification).c_str());
    io::save_oa(array, a.out);
    std::printf("wrote %s\n", a.out.c_str());
    return kExitOk;
}

struct DesignBuildArgs {
    std::string measure;
    int M = 0;
    int n = 0;
    int t = 0;
    std::int64_t q = 0;
    int d = 0;
    std::string oa_path;
    std::string out = "design.json";
};

rules1d::Rule1D pick_rule(const DesignBuildArgs& a) {
    const bool gaussian = a.measure == "gaussian";
    if (!gaussian && a.measure != "chebyshev")
        throw std::invalid_argument("measure must be gaussian or chebyshev");
    if (a.M > 0) {
        if (!gaussian)
            throw std::invalid_argument("--M builds a Gaussian rule; use --n for chebyshev");
        return rules1d::hilbert_kamke_rule(a.M);
    }
    if (a.n > 0) {
        if (gaussian)
            throw std::invalid_argument("--n builds a chebyshev rule; use --M or --t/--q");
        return rules1d::chebyshev_rule(a.n);
    }
    if (a.t > 0 && a.q > 0) {
        if (!gaussian)
            throw std::invalid_argument("--t/--q rational weights target the Gaussian measure");
        return rules1d::rational_weight_rule(a.t, a.q);
    }
    throw std::invalid_argument("pick one of --M, --n, or --t with --q");
}

int run_design_build(const DesignBuildArgs& a, const Budget& budget) {
    const rules1d::Rule1D rule = pick_rule(a);
    designs::WeightedDesign design;
    std::uint64_t grid = 0;
    std::string oa_ref;

    if (!a.oa_path.empty()) {
        auto array = std::make_shared<oa::OrthogonalArray>(io::load_oa(a.oa_path));
        grid = checked_pow(static_cast<std::uint64_t>(array->q),
                           static_cast<unsigned>(a.d));
        if (array->k != static_cast<std::size_t>(a.d))
            throw std::invalid_argument("array has " + std::to_string(array->k) +
                                        " columns, requested dimension " +
                                        std::to_string(a.d));
        if (array->q == static_cast<std::int64_t>(rule.size()))
            design = designs::reduce_by_oa(rule, array);
        else if (rule.rational_weights && array->q == rule.rational_weights->denom)
            design = designs::reduce_by_oa_multiset(rule, array);
        else
            throw std::invalid_argument(
                "array levels match neither the rule's node count nor its weight "
                "denominator");
        oa_ref = oa_reference(a.oa_path, a.out);
    } else {
        design = designs::product_design(rule, a.d, budget);
        grid = checked_pow(rule.size(), static_cast<unsigned>(a.d));
    }

    print_reduction(design.size(), grid);
    io::save_design(design, a.out, oa_ref);
    std::printf("wrote %s\n", a.out.c_str());
    return kExitOk;
}

struct VerifyArgs {
    std::string design_path;
    int t = 0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-10;
    std::uint64_t sample = 0;  // 0 = exhaustive
    std::string out = "report.json";
};

int run_verify(const VerifyArgs& a, Budget budget, int threads) {
    const designs::WeightedDesign design = io::load_design(a.design_path);
    budget.monomial_sample_cap =
        a.sample == 0 ? std::numeric_limits<std::uint64_t>::max() : a.sample;
    const verify::VerificationReport rep =
        verify::verify_design(design, a.t, {a.rel_tol, a.abs_tol}, budget, threads);
    io::save_report(rep, a.out);
    print_verification(rep);
    std::printf("wrote %s\n", a.out.c_str());
    return rep.passed ? kExitOk : kExitVerifyFail;
}

struct EmbedArgs {
    std::string design_path;
    int r = 0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-10;
    std::uint64_t samples = 100;
    std::string out = "embedding.csv";
    std::string report = "embed_report.json";
};

int run_embed(const EmbedArgs& a, Budget budget, int threads) {
    if (a.r < 1) throw std::invalid_argument("--r must be at least 1");
    const designs::WeightedDesign design = io::load_design(a.design_path);

    budget.monomial_sample_cap = std::numeric_limits<std::uint64_t>::max();
    const verify::VerificationReport rep =
        verify::verify_design(design, 2 * a.r, {a.rel_tol, a.abs_tol}, budget, threads);
    print_verification(rep);
    if (!rep.passed) {
        std::fprintf(stderr, "embed: design fails verification at degree %d\n", 2 * a.r);
        return kExitVerifyFail;
    }

    const designs::SphericalDesign sph = designs::gaussian_to_spherical(design, a.r, budget);
    const verify::HilbertReport hil = verify::check_hilbert_identity(sph, a.r, a.samples);
    const verify::Embedding emb = verify::embedding_map(sph, a.r);
    io::save_embedding_csv(emb, a.out);

    nlohmann::json j{{"schema", "embed-report/1"},
                     {"dim", emb.dim},
                     {"power", 2 * a.r},
                     {"points", emb.size()},
                     {"design_max_rel_error", rep.max_rel_error},
                     {"identity_points_tested", hil.points_tested},
                     {"identity_max_rel_error", hil.max_rel_error},
                     {"passed", hil.passed}};
    std::ofstream(a.report) << j.dump(2) << "\n";

    std::printf("embedding (d=%zu, 2r=%d, N=%zu)\n", emb.dim, 2 * a.r, emb.size());
    std::printf("identity max_rel_err=%.3g %s\n", hil.max_rel_error,
                hil.passed ? "PASS" : "FAIL");
    std::printf("wrote %s and %s\n", a.out.c_str(), a.report.c_str());
    return hil.passed ? kExitOk : kExitVerifyFail;
}

struct GroupCheckArgs {
    std::string group;
    int d = 0;
    int degree = 0;
    std::vector<double> x;
    double threshold = 1e-9;
};

designs::PermSet load_perm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + " is not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object() || j.value("schema", "") != "perms/1")
        throw std::runtime_error(path + " does not carry schema \"perms/1\"");
    designs::PermSet z;
    z.degree = j.at("degree").get<int>();
    z.perms = j.at("perms").get<std::vector<std::vector<int>>>();
    if (z.perms.empty()) throw std::runtime_error(path + " lists no permutations");
    z.is_group = designs::closure_check(z);
    return z;
}

int run_group_check(const GroupCheckArgs& a, const Budget& budget) {
    designs::PermSet z;
    if (a.group == "psl28") {
        z = designs::psl28();
    } else if (a.group == "sym") {
        if (a.d < 1) throw std::invalid_argument("--group sym needs --d");
        z = designs::symmetric_group(a.d, budget);
    } else {
        z = load_perm_file(a.group);
    }
    if (a.d > 0 && a.d != z.degree)
        throw std::invalid_argument("--d disagrees with the group's degree " +
                                    std::to_string(z.degree));

    std::vector<double> x = a.x;
    if (x.empty()) {
        x.resize(static_cast<std::size_t>(z.degree));
        double norm2 = 0.0;
        for (int i = 0; i < z.degree; ++i) {
            x[static_cast<std::size_t>(i)] = i + 1;
            norm2 += double(i + 1) * (i + 1);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : x) v *= inv;
    }
    if (x.size() != static_cast<std::size_t>(z.degree))
        throw std::invalid_argument("--x must list exactly " + std::to_string(z.degree) +
                                    " coordinates");

    const verify::OrbitBoundaryReport rep =
        verify::compare_orbit_to_symmetric(z, x, a.degree, a.threshold);
    std::printf("group size=%zu degree_checked=%d threshold=%.3g\n", z.perms.size(),
                rep.degree_checked, rep.threshold);
    for (int deg = 1; deg <= rep.degree_checked; ++deg)
        std::printf("  degree %d: max_abs_diff=%.6g\n", deg,
                    rep.max_abs_diff_by_degree[static_cast<std::size_t>(deg)]);
    if (rep.first_violation_degree < 0) {
        std::printf("orbit matches symmetric averages through degree %d\n",
                    rep.degree_checked);
        return kExitOk;
    }
    std::printf("first violation at degree %d\n", rep.first_violation_degree);
    return kExitVerifyFail;
}

struct ReproArgs {
    std::string out_dir = "repro";
};

int run_repro(const ReproArgs& a, Budget budget, int threads) {
    fs::create_directories(a.out_dir);
    const fs::path dir = a.out_dir;
    budget.monomial_sample_cap = std::numeric_limits<std::uint64_t>::max();
    bool all_pass = true;

    {
        std::printf("[gaussian d=7]\n");
        auto array = std::make_shared<oa::OrthogonalArray>(
            oa::from_generator(codes::trace_code_generators(7, 1, 5)));
        oa::certify(*array, 5, budget, threads);
        io::save_oa(*array, dir / "oa_gaussian_d7.json");

        const rules1d::Rule1D rule = rules1d::hilbert_kamke_rule(3);
        const designs::WeightedDesign design = designs::reduce_by_oa(rule, array);
        io::save_design(design, dir / "design_gaussian_d7.json", "oa_gaussian_d7.json");
        print_reduction(design.size(), checked_pow(7, 7));

        const verify::VerificationReport rep =
            verify::verify_design(design, 5, {1e-9, 1e-10}, budget, threads);
        io::save_report(rep, dir / "report_gaussian_d7.json");
        print_verification(rep);
        all_pass = all_pass && rep.passed;
    }
    {
        std::printf("[equilibrium d=9]\n");
        auto array = std::make_shared<oa::OrthogonalArray>(
            oa::from_generator(codes::trace_code_generators(3, 2, 5)));
        oa::certify(*array, 5, budget, threads);
        io::save_oa(*array, dir / "oa_equilibrium_d9.json");

        const rules1d::Rule1D rule = rules1d::chebyshev_rule(3);
        const designs::WeightedDesign design = designs::reduce_by_oa(rule, array);
        io::save_design(design, dir / "design_equilibrium_d9.json",
                        "oa_equilibrium_d9.json");
        print_reduction(design.size(), checked_pow(3, 9));

        const verify::VerificationReport rep =
            verify::verify_design(design, 5, {1e-12, 1e-12}, budget, threads);
        io::save_report(rep, dir / "report_equilibrium_d9.json");
        print_verification(rep);
        all_pass = all_pass && rep.passed;
    }

    std::printf("artifacts in %s\n", a.out_dir.c_str());
    return all_pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthogonal-array based weighted design toolkit"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for verification")
        ->check(CLI::Range(1, 256));

    OaBuildArgs oa_args;
    auto* oa_cmd = app.add_subcommand("oa-build", "build and certify an orthogonal array");
    oa_cmd->add_option("--q", oa_args.q, "symbol count (prime power)")->required();
    oa_cmd->add_option("--m", oa_args.m, "extension degree of the evaluation field")
        ->required();
    oa_cmd->add_option("--t", oa_args.t, "target strength")->required();
    oa_cmd->add_option("--columns", oa_args.columns,
                       "keep only these column indices (comma separated)")
        ->delimiter(',');
    oa_cmd->add_option("--out", oa_args.out, "output array file");

    DesignBuildArgs db_args;
    auto* db_cmd = app.add_subcommand("design-build", "build a weighted design");
    db_cmd->add_option("--measure", db_args.measure, "gaussian or chebyshev")->required();
    db_cmd->add_option("--M", db_args.M, "Gaussian fifth-degree rule parameter (2M+1 nodes)");
    db_cmd->add_option("--n", db_args.n, "chebyshev node count (degree 2n-1)");
    db_cmd->add_option("--t", db_args.t, "target degree for the rational-weight rule");
    db_cmd->add_option("--q", db_args.q, "weight denominator for the rational-weight rule");
    db_cmd->add_option("--d", db_args.d, "dimension")->required()->check(CLI::Range(1, 64));
    db_cmd->add_option("--oa", db_args.oa_path, "certified array file replacing the grid");
    db_cmd->add_option("--out", db_args.out, "output design file");

    VerifyArgs v_args;
    auto* v_cmd = app.add_subcommand("verify", "check a design's moments up to degree t");
    v_cmd->add_option("--design", v_args.design_path, "design file")->required();
    v_cmd->add_option("--t", v_args.t, "degree to check")->required();
    v_cmd->add_option("--rel-tol", v_args.rel_tol, "relative tolerance");
    v_cmd->add_option("--abs-tol", v_args.abs_tol, "absolute tolerance for zero moments");
    v_cmd->add_option("--sample", v_args.sample,
                      "check a fixed-seed sample of this many monomials instead of all");
    v_cmd->add_option("--out", v_args.out, "report file");

    EmbedArgs e_args;
    auto* e_cmd = app.add_subcommand("embed", "turn a Gaussian 2r-design into a 2r-norm "
                                              "embedding matrix");
    e_cmd->add_option("--design", e_args.design_path, "design file")->required();
    e_cmd->add_option("--r", e_args.r, "half the embedding power")->required();
    e_cmd->add_option("--rel-tol", e_args.rel_tol, "design verification tolerance");
    e_cmd->add_option("--abs-tol", e_args.abs_tol, "absolute tolerance for zero moments");
    e_cmd->add_option("--samples", e_args.samples, "identity test vectors beyond the basis");
    e_cmd->add_option("--out", e_args.out, "embedding matrix CSV");
    e_cmd->add_option("--report", e_args.report, "identity report file");

    GroupCheckArgs g_args;
    auto* g_cmd = app.add_subcommand("group-check",
                                     "compare orbit averages against symmetric averages");
    g_cmd->add_option("--group", g_args.group, "psl28, sym, or a perms/1 JSON file")
        ->required();
    g_cmd->add_option("--d", g_args.d, "degree of the permutations (required for sym)");
    g_cmd->add_option("--degree", g_args.degree, "highest monomial degree to compare")
        ->required()
        ->check(CLI::Range(1, 32));
    g_cmd->add_option("--x", g_args.x, "base point coordinates (comma separated)")
        ->delimiter(',');
    g_cmd->add_option("--threshold", g_args.threshold, "violation threshold");

    ReproArgs r_args;
    auto* r_cmd = app.add_subcommand("repro", "run the two flagship pipelines end to end");
    r_cmd->add_option("--out-dir", r_args.out_dir, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const Budget budget = budget_from_env();
        if (oa_cmd->parsed()) return run_oa_build(oa_args, budget, threads);
        if (db_cmd->parsed()) return run_design_build(db_args, budget);
        if (v_cmd->parsed()) return run_verify(v_args, budget, threads);
        if (e_cmd->parsed()) return run_embed(e_args, budget, threads);
        if (g_cmd->parsed()) return run_group_check(g_args, budget);
        if (r_cmd->parsed()) return run_repro(r_args, budget, threads);
        return kExitUsage;
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "budget: %s (needs %llu, cap %llu)\n", e.what(),
                     static_cast<unsigned long long>(e.required),
                     static_cast<unsigned long long>(e.limit));
        return kExitBudget;
    } catch (const ConvergenceFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitVerifyFail;
    } catch (const BalanceViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitVerifyFail;
    } catch (const InfeasibleRounding& e) {
        std::fprintf(stderr, "error: %s (smallest feasible q: %lld)\n", e.what(),
                     static_cast<long long>(e.min_feasible_q));
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
