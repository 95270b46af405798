#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sumset/cxmachine.hpp"
#include "sumset/density.hpp"
#include "sumset/errors.hpp"
#include "sumset/finite_group.hpp"
#include "sumset/finitegrp.hpp"
#include "sumset/parallel.hpp"
#include "sumset/scenarios.hpp"
#include "sumset/setspec.hpp"
#include "sumset/structure.hpp"
#include "sumset/sturmian.hpp"

using nlohmann::json;
using namespace sumset;

namespace {

struct Common {
    int workers = 0;
    std::uint64_t seed = 20240531;
    std::string out;
    std::string csv;
};

struct Outcome {
    json report;
    bool pass = true;
    std::vector<SeriesRow> rows;
};

// int | lattice:d | cyclic:m | dihedral | solvable:p | finite:NAME-or-file
GroupDescriptor parse_group(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto num = [&] {
        try {
            return std::stoll(arg);
        } catch (const std::exception&) {
            throw InputError("group '" + s + "' needs a numeric parameter");
        }
    };
    if (kind == "int") return GroupDescriptor::int_line();
    if (kind == "lattice") return GroupDescriptor::lattice(num());
    if (kind == "cyclic") return GroupDescriptor::cyclic(num());
    if (kind == "dihedral") return GroupDescriptor::dihedral_inf();
    if (kind == "solvable") return GroupDescriptor::solvable(num());
    if (kind == "finite") return descriptor_from_json({{"kind", "FiniteTable"}, {"id", arg}});
    throw InputError("unknown group '" + s + "'");
}

FiniteGroup load_finite(const std::string& id) {
    std::ifstream probe(id);
    if (probe) return FiniteGroup::load(id);
    return small_groups::by_name(id);
}

json parse_json_arg(const std::string& s) {
    try {
        return json::parse(s);
    } catch (const json::exception& e) {
        throw InputError("bad JSON argument '" + s + "': " + e.what());
    }
}

// "lo,hi" with rationals or decimals.
TorusInterval parse_interval(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError("interval must be 'lo,hi'");
    return TorusInterval::closed(Rational::parse(s.substr(0, comma)), Rational::parse(s.substr(comma + 1)));
}

void emit(const Common& c, const Outcome& o) {
    const std::string text = o.report.dump(2);
    if (c.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(c.out);
        if (!f) throw InputError("cannot write " + c.out);
        f << text << "\n";
    }
    if (!c.csv.empty()) {
        std::ofstream f(c.csv);
        if (!f) throw InputError("cannot write " + c.csv);
        write_csv(f, o.rows);
    }
}

json with_header(const std::string& command, json body) {
    json j = {{"schema_version", 1}, {"command", command}};
    j.update(body);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sumset density and structure verification"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--workers", common.workers, "worker threads (0 = hardware)");
    app.add_option("--seed", common.seed, "seed for sampled verification");
    app.add_option("--out", common.out, "write the JSON report here instead of stdout");
    app.add_option("--csv", common.csv, "write the density series as CSV");

    std::function<Outcome()> run;

    // density
    auto* density = app.add_subcommand("density", "upper/lower density along a Folner family");
    std::string d_expr, d_family = "sym", d_mode = "upper";
    std::int64_t d_n = 1000, d_shift = 10;
    double d_tail = 0.2;
    density->add_option("--expr", d_expr, "set expression (file or inline JSON)")->required();
    density->add_option("--family", d_family, "sym | pos | shifted | box | skew");
    density->add_option("--n", d_n, "largest n");
    density->add_option("--tail", d_tail, "tail fraction for the statistic");
    density->add_option("--shift", d_shift, "shift factor for the shifted family");
    density->add_option("--mode", d_mode, "headline value: upper | lower");
    density->callback([&] {
        run = [&] {
            const SetExprPtr e = load_set(d_expr);
            FolnerFamily fam = FolnerFamily::parse(e->group, d_family);
            fam.shift = d_shift;
            const DensityPair d = density_along(e, fam, d_n, d_tail);
            if (d_mode != "upper" && d_mode != "lower") throw InputError("--mode must be upper or lower");
            const double value = d_mode == "upper" ? d.upper.value : d.lower.value;
            Outcome o;
            o.report = with_header("density", {{"family", fam.name()},
                                               {"n", d_n},
                                               {"mode", d_mode},
                                               {"value", value},
                                               {"upper", to_json(d.upper)},
                                               {"lower", to_json(d.lower)}});
            o.rows = d.rows;
            return o;
        };
    });

    // banach
    auto* banach = app.add_subcommand("banach", "extremal window density on IntLine / IntLattice");
    std::string b_expr;
    std::int64_t b_L = 1000, b_lo = -100000, b_hi = 100000;
    bool b_lower = false;
    banach->add_option("--expr", b_expr)->required();
    banach->add_option("--L", b_L, "window length");
    banach->add_option("--lo", b_lo, "first window start");
    banach->add_option("--hi", b_hi, "last window start");
    banach->add_flag("--lower", b_lower, "lower Banach density instead of upper");
    banach->callback([&] {
        run = [&] {
            const DensityEstimate d = banach_density(load_set(b_expr), !b_lower, b_L, b_lo, b_hi);
            Outcome o;
            o.report = with_header("banach", {{"value", d.value}, {"estimate", to_json(d)}});
            return o;
        };
    });

    // sturmian
    auto* sturm = app.add_subcommand("sturmian", "equidistribution count and members of a Sturmian set");
    std::string s_alpha = "golden", s_interval = "0,3/10";
    std::int64_t s_n = 100000, s_lo = 0, s_hi = -1;
    double s_tol = 2e-3;
    sturm->add_option("--alpha", s_alpha, "golden | sqrt2-1 | p,q,r,d for (p + q sqrt d)/r");
    sturm->add_option("--interval", s_interval, "closed arc lo,hi");
    sturm->add_option("--n", s_n, "count n in [0, n)");
    sturm->add_option("--tol", s_tol, "allowed |count/n - m(I)|");
    sturm->add_option("--members-lo", s_lo, "list members from here");
    sturm->add_option("--members-hi", s_hi, "list members up to here (omit for none)");
    sturm->callback([&] {
        run = [&] {
            const QuadIrr alpha = parse_alpha(s_alpha);
            const TorusInterval I = parse_interval(s_interval);
            const Equidistribution e = equidistribution_check(alpha, I, s_n);
            const double dev = std::abs(e.ratio - I.measure().to_double());
            Outcome o;
            o.report = with_header("sturmian", {{"alpha", alpha.str()},
                                                {"interval", interval_to_json(I)},
                                                {"n", e.n},
                                                {"count", e.count},
                                                {"ratio", e.ratio},
                                                {"discrepancy", e.discrepancy},
                                                {"deviation", dev},
                                                {"tol", s_tol}});
            if (s_hi >= s_lo) {
                SturmianSpec spec;
                spec.alpha = alpha;
                spec.interval = I;
                const WindowSet w =
                    sturmian_members(spec, GroupDescriptor::int_line(), BoxParams::interval(s_lo, s_hi));
                json mem = json::array();
                for (std::uint64_t i = 0; i < w.size(); ++i)
                    if (w.mask[i]) mem.push_back(w.at(i));
                o.report["members"] = mem;
            }
            o.pass = dev <= s_tol;
            o.report["pass"] = o.pass;
            return o;
        };
    });

    // kneser-z
    auto* kz = app.add_subcommand("kneser-z", "Kneser-type inequality for A + B on Z at scale");
    std::string kz_a, kz_b;
    ScenarioOptions kz_opts;
    kz->add_option("--a", kz_a, "set A (default: the built-in suite)");
    kz->add_option("--b", kz_b, "set B");
    kz->add_option("--n", kz_opts.n, "scale [-n, n]");
    kz->add_option("--slack", kz_opts.kneser_slack, "allowed shortfall");
    kz->add_option("--a-radius", kz_opts.a_radius, "truncate A to [-r, r] for the sumset (0 = none)");
    kz->callback([&] {
        run = [&] {
            if (kz_a.empty() != kz_b.empty()) throw InputError("give both --a and --b, or neither");
            std::vector<KneserCase> cases;
            if (kz_a.empty())
                cases = kneser_z_cases();
            else
                cases.push_back({"custom", load_set(kz_a), load_set(kz_b)});
            Outcome o;
            json arr = json::array();
            int applicable = 0;
            for (const auto& c : cases) {
                const ScenarioReport r = kneser_z_check(c.id, c.a, c.b, kz_opts);
                if (r.details.value("inequality_applies", false)) ++applicable;
                o.pass = o.pass && r.pass;
                arr.push_back(r.to_json());
            }
            o.report = with_header("kneser-z", {{"n", kz_opts.n},
                                                {"cases", arr},
                                                {"applicable", applicable},
                                                {"pass", o.pass}});
            return o;
        };
    });

    // kemperman
    auto* kem = app.add_subcommand("kemperman", "reduction theorem for small product sets in finite groups");
    int k_order_max = 16, k_exh_max = 8;
    std::uint64_t k_samples = 100000;
    std::vector<std::string> k_groups;
    kem->add_option("--order-max", k_order_max, "largest group order in the built-in list");
    kem->add_option("--exhaustive-max", k_exh_max, "exhaustive up to this order, sampled above");
    kem->add_option("--samples", k_samples, "sampled pairs per group");
    kem->add_option("--group", k_groups, "group name (Z6, D4, Q8, Z2xZ4, ...) or Cayley-table file");
    kem->callback([&] {
        run = [&] {
            std::vector<std::string> names = k_groups;
            if (names.empty()) {
                for (const auto& g : kemperman_exhaustive_groups()) names.push_back(g);
                for (const auto& g : kemperman_sampled_groups()) names.push_back(g);
            }
            VerifyOptions vo;
            vo.exhaustive_max_order = k_exh_max;
            vo.samples = k_samples;
            vo.seed = common.seed;
            Outcome o;
            json arr = json::array();
            std::uint64_t violations = 0;
            for (const auto& name : names) {
                const FiniteGroup g = load_finite(name);
                if (k_groups.empty() && g.order() > k_order_max) continue;
                const VerifyReport r = kemperman_verify(g, vo);
                violations += r.violations;
                arr.push_back(r.to_json());
            }
            o.pass = violations == 0;
            o.report = with_header("kemperman",
                                   {{"seed", common.seed}, {"groups", arr}, {"violations", violations}, {"pass", o.pass}});
            return o;
        };
    });

    // kneser-abelian
    auto* ka = app.add_subcommand("kneser-abelian", "Kneser equality for abelian groups, exhaustive");
    int ka_order_max = 10;
    std::vector<std::string> ka_groups;
    ka->add_option("--order-max", ka_order_max, "largest order");
    ka->add_option("--group", ka_groups, "abelian group name or Cayley-table file");
    ka->callback([&] {
        run = [&] {
            std::vector<std::string> names = ka_groups.empty() ? abelian_groups_up_to(ka_order_max) : ka_groups;
            Outcome o;
            json arr = json::array();
            std::uint64_t violations = 0;
            for (const auto& name : names) {
                const VerifyReport r = kneser_abelian_verify(load_finite(name));
                violations += r.violations;
                arr.push_back(r.to_json());
            }
            o.pass = violations == 0;
            o.report = with_header("kneser-abelian", {{"groups", arr}, {"violations", violations}, {"pass", o.pass}});
            return o;
        };
    });

    // structure
    auto* st = app.add_subcommand("structure", "periodic supersets, spread-out, periodic runs, containment");
    std::string st_expr, st_check = "spread-out", st_candidate;
    std::int64_t st_lo = -100000, st_hi = 100000, st_mmax = 50, st_m = 1, st_L = 1000, st_bL = 0;
    double st_tol = 0.01;
    st->add_option("--expr", st_expr)->required();
    st->add_option("--check", st_check, "periodic | spread-out | run | containment");
    st->add_option("--lo", st_lo);
    st->add_option("--hi", st_hi);
    st->add_option("--m-max", st_mmax, "largest modulus for residue scans");
    st->add_option("--m", st_m, "modulus for run");
    st->add_option("--L", st_L, "run length");
    st->add_option("--banach-L", st_bL, "window length for d* (0 = automatic)");
    st->add_option("--candidate", st_candidate, "Sturmian spec JSON for containment");
    st->add_option("--tol", st_tol, "density tolerance for containment");
    st->callback([&] {
        run = [&] {
            const SetExprPtr e = load_set(st_expr);
            Outcome o;
            json body = {{"check", st_check}, {"window", {st_lo, st_hi}}};
            if (st_check == "periodic") {
                json arr = json::array();
                for (const auto& w : detect_periodic_superset(e, st_lo, st_hi, st_mmax, st_bL)) arr.push_back(w.to_json());
                body["witnesses"] = arr;
            } else if (st_check == "spread-out") {
                const SpreadOutVerdict v = spread_out_witness_Z(e, st_lo, st_hi, st_mmax, st_bL);
                body["verdict"] = v.to_json();
            } else if (st_check == "run") {
                const WindowSet w = materialize(e, BoxParams::interval(st_lo, st_hi));
                const auto r = find_periodic_run(w, st_m, st_L, st_lo, st_hi);
                body["m"] = st_m;
                body["L"] = st_L;
                body["witness"] = r ? json{{"x", r->x}, {"r", r->r}} : json(nullptr);
            } else if (st_check == "containment") {
                if (st_candidate.empty()) throw InputError("containment needs --candidate");
                std::string text = st_candidate;
                if (std::ifstream f(st_candidate); f) {
                    std::stringstream ss;
                    ss << f.rdbuf();
                    text = ss.str();
                }
                const SturmianSpec spec = sturmian_from_json(parse_json_arg(text));
                const ContainmentResult c = verify_sturmian_containment(e, spec, st_lo, st_hi, st_tol, st_bL);
                body["result"] = c.to_json();
            } else {
                throw InputError("unknown --check '" + st_check + "'");
            }
            o.report = with_header("structure", body);
            return o;
        };
    });

    // cxmachine
    auto* cx = app.add_subcommand("cxmachine", "counterexample construction on Z[1/p] x| Z");
    std::int64_t cx_p = 2;
    int cx_n = 8;
    std::string cx_eps = "1/5", cx_alpha = "golden";
    cx->add_option("--p", cx_p, "prime p");
    cx->add_option("--epsilon", cx_eps, "epsilon in (0, 1/4)");
    cx->add_option("--alpha", cx_alpha, "rotation for the Sturmian level set");
    cx->add_option("--n", cx_n, "box scale");
    cx->callback([&] {
        run = [&] {
            const CxContext ctx(cx_p);
            const Cx1Params params = Cx1Params::make(Rational::parse(cx_eps), parse_alpha(cx_alpha));
            Outcome o;
            bool pass = false;
            json body = cxmachine_report(ctx, params, cx_n, pass);
            o.pass = pass;
            o.report = with_header("cxmachine", body);
            o.report["pass"] = pass;
            return o;
        };
    });

    // appendix
    auto* ap = app.add_subcommand("appendix", "appendix constructions on Z and the base identities");
    std::string ap_scenario = "base", ap_mI = "3/10", ap_alpha = "golden";
    ScenarioOptions ap_opts;
    bool ap_double = false;
    ap->add_option("--scenario", ap_scenario, "base | e1 | e2 | e3");
    ap->add_option("--mI", ap_mI, "interval length; I = [0, mI]");
    ap->add_option("--alpha", ap_alpha, "golden | sqrt2-1 | p,q,r,d");
    ap->add_option("--n", ap_opts.n, "scale [-n, n]");
    ap->add_option("--tol", ap_opts.tol, "tolerance (default max(0.01, 20 log n / n))");
    ap->add_flag("--double-check", ap_double, "re-run at 2n and compare margins");
    ap->callback([&] {
        run = [&] {
            const Rational m = Rational::parse(ap_mI);
            const TorusInterval I = m >= Rational(1) ? TorusInterval::full() : TorusInterval::from_length(Rational(0), m);
            const QuadIrr alpha = parse_alpha(ap_alpha);
            const ScenarioReport r = run_scenario(ap_scenario, alpha, I, ap_opts);
            Outcome o;
            o.report = r.to_json();
            o.report["command"] = "appendix";
            o.pass = r.pass;
            o.rows = r.series;
            if (ap_double) {
                ScenarioOptions o2 = ap_opts;
                o2.n = 2 * ap_opts.n;
                if (ap_opts.tol < 0) o2.tol = ap_opts.tolerance();
                const ScenarioReport r2 = run_scenario(ap_scenario, alpha, I, o2);
                const DoublingCheck dc = compare_doubled(r, r2);
                o.report["doubled"] = {{"report", r2.to_json()}, {"check", dc.to_json()}};
                o.pass = o.pass && r2.pass && dc.ok;
                o.report["pass"] = o.pass;
            }
            return o;
        };
    });

    // folner-defect
    auto* fd = app.add_subcommand("folner-defect", "exact |F_n \\ g F_n| defects along a family");
    std::string fd_group = "int", fd_family = "sym";
    std::vector<std::string> fd_g;
    std::int64_t fd_nmin = 1, fd_nmax = 8;
    fd->add_option("--group", fd_group, "int | dihedral | lattice:d | solvable:p");
    fd->add_option("--family", fd_family, "sym | pos | shifted | box | skew");
    fd->add_option("--g", fd_g, "element as JSON (repeatable); default: the generators");
    fd->add_option("--n-min", fd_nmin);
    fd->add_option("--n-max", fd_nmax);
    fd->callback([&] {
        run = [&] {
            const GroupDescriptor g = parse_group(fd_group);
            const FolnerFamily fam = FolnerFamily::parse(g, fd_family);
            std::vector<Element> elts;
            for (const auto& s : fd_g) elts.push_back(element_from_json(g, parse_json_arg(s)));
            if (elts.empty()) {
                switch (g.kind) {
                    case GroupKind::IntLine:
                        elts = {IntElt{1}};
                        break;
                    case GroupKind::DihedralInf:
                        elts = {DihElt{1, 1}, DihElt{0, -1}};
                        break;
                    case GroupKind::SolvablePK:
                        elts = {affine_elt(g.param, Rational(1), 0), affine_elt(g.param, Rational(0), 1)};
                        break;
                    default:
                        throw InputError("give --g for this group");
                }
            }
            Outcome o;
            json arr = json::array();
            for (const Element& e : elts) {
                json rows = json::array();
                bool decreasing = true;
                std::optional<Rational> prev;
                for (std::int64_t n = fd_nmin; n <= fd_nmax; ++n) {
                    const Rational d = folner_defect(fam, n, e);
                    rows.push_back({{"n", n}, {"defect", d.str()}, {"value", d.to_double()}});
                    if (prev && !(d < *prev)) decreasing = false;
                    prev = d;
                }
                o.pass = o.pass && decreasing;
                arr.push_back({{"g", element_to_json(g, e)}, {"rows", rows}, {"strictly_decreasing", decreasing}});
            }
            o.report = with_header("folner-defect",
                                   {{"group", g.name()}, {"family", fam.name()}, {"defects", arr}, {"pass", o.pass}});
            return o;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : 2;
    }
    try {
        if (common.workers > 0) set_worker_count(common.workers);
        const Outcome o = run();
        emit(common, o);
        return o.pass ? 0 : 1;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::bad_alloc&) {
        std::cerr << "resource error: out of memory\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
