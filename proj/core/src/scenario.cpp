#include "blowuplab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace blowuplab {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ScenarioError(where, "expected a number");
    return j.get<double>();
}

const json& require_key(const json& j, const std::string& key,
                        const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw ScenarioError(where, "missing required key '" + key + "'");
    return j.at(key);
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    Scenario sc;
    if (!j.is_object()) throw ScenarioError("/", "scenario must be an object");
    if (j.contains("name")) sc.name = j.at("name").get<std::string>();

    const json& jg = require_key(j, "grid", "/");
    const std::string kind = require_key(jg, "kind", "/grid").get<std::string>();
    if (kind == "interval") sc.kind = GridKind::Interval;
    else if (kind == "rectangle") sc.kind = GridKind::Rectangle;
    else throw ScenarioError("/grid/kind", "must be 'interval' or 'rectangle'");
    const int dim = sc.kind == GridKind::Interval ? 1 : 2;
    const json& jb = require_key(jg, "bounds", "/grid");
    const json& jn = require_key(jg, "n", "/grid");
    if (!jb.is_array() || static_cast<int>(jb.size()) != dim)
        throw ScenarioError("/grid/bounds", "expected " + std::to_string(dim) +
                                                " [a,b] pairs");
    if (!jn.is_array() || static_cast<int>(jn.size()) != dim)
        throw ScenarioError("/grid/n", "expected " + std::to_string(dim) +
                                           " node counts");
    for (int d = 0; d < dim; ++d) {
        if (!jb[d].is_array() || jb[d].size() != 2)
            throw ScenarioError("/grid/bounds", "each axis needs [a,b]");
        sc.bounds[d] = {require_number(jb[d][0], "/grid/bounds"),
                        require_number(jb[d][1], "/grid/bounds")};
        sc.n[d] = jn[d].get<int>();
    }
    if (dim == 1) sc.n[1] = 1;

    const json& jm = require_key(j, "model", "/");
    sc.f_key = require_key(jm, "f", "/model").get<std::string>();
    sc.zeta_key = require_key(jm, "zeta", "/model").get<std::string>();
    if (jm.contains("p")) sc.p = require_number(jm.at("p"), "/model/p");
    auto opt = [&](const char* k) -> std::optional<double> {
        if (jm.contains(k)) return require_number(jm.at(k), std::string("/model/") + k);
        return std::nullopt;
    };
    sc.alpha = opt("alpha");
    sc.epsilon = opt("epsilon");
    sc.C0 = opt("C0");
    sc.kappa = opt("kappa");
    sc.lambda_pos = opt("lambda_pos");

    sc.regime = parse_regime(require_key(j, "regime", "/").get<std::string>());

    const json& ji = require_key(j, "initial_data", "/");
    if (ji.is_string()) {
        const std::string s = ji.get<std::string>();
        if (s.rfind("eigen_scaled:", 0) == 0) {
            sc.init_key = "eigen_scaled";
            sc.init_amplitude = std::stod(s.substr(13));
        } else if (s.rfind("table:", 0) == 0) {
            sc.init_key = "table";
            sc.table_path = s.substr(6);
        } else {
            throw ScenarioError("/initial_data", "unknown constructor '" + s + "'");
        }
    } else if (ji.is_object()) {
        sc.init_key = require_key(ji, "key", "/initial_data").get<std::string>();
        if (sc.init_key == "eigen_scaled") {
            sc.init_amplitude =
                require_number(require_key(ji, "lambda", "/initial_data"),
                               "/initial_data/lambda");
        } else if (sc.init_key == "proposition_cutoff") {
            const json& jk = require_key(ji, "K", "/initial_data");
            if (!jk.is_array() || static_cast<int>(jk.size()) != dim)
                throw ScenarioError("/initial_data/K", "expected per-axis [a,b]");
            for (int d = 0; d < dim; ++d)
                sc.cutoff_K[d] = {require_number(jk[d][0], "/initial_data/K"),
                                  require_number(jk[d][1], "/initial_data/K")};
            if (ji.contains("order")) sc.cutoff_order = ji.at("order").get<int>();
        } else if (sc.init_key == "table") {
            sc.table_path =
                require_key(ji, "path", "/initial_data").get<std::string>();
        } else {
            throw ScenarioError("/initial_data/key",
                                "unknown constructor '" + sc.init_key + "'");
        }
    } else {
        throw ScenarioError("/initial_data", "expected string or object");
    }

    if (j.contains("solver")) {
        const json& js = j.at("solver");
        if (js.contains("horizon"))
            sc.controls.horizon = require_number(js.at("horizon"), "/solver/horizon");
        if (js.contains("ladder")) {
            sc.controls.ladder.clear();
            for (const auto& v : js.at("ladder"))
                sc.controls.ladder.push_back(require_number(v, "/solver/ladder"));
            if (sc.controls.ladder.empty())
                throw ScenarioError("/solver/ladder", "must be non-empty");
        }
        if (js.contains("eps_reg"))
            sc.controls.eps_reg = require_number(js.at("eps_reg"), "/solver/eps_reg");
        if (js.contains("sigma_d"))
            sc.controls.sigma_d = require_number(js.at("sigma_d"), "/solver/sigma_d");
        if (js.contains("sigma_r"))
            sc.controls.sigma_r = require_number(js.at("sigma_r"), "/solver/sigma_r");
        if (js.contains("dt_min"))
            sc.controls.dt_min = require_number(js.at("dt_min"), "/solver/dt_min");
        if (js.contains("dt_init"))
            sc.controls.dt_init = require_number(js.at("dt_init"), "/solver/dt_init");
    }
    if (j.contains("check")) {
        const json& jc = j.at("check");
        if (jc.contains("range_lo"))
            sc.check_range.lo = require_number(jc.at("range_lo"), "/check/range_lo");
        if (jc.contains("range_hi"))
            sc.check_range.hi = require_number(jc.at("range_hi"), "/check/range_hi");
        if (jc.contains("horizon"))
            sc.check_range.horizon =
                require_number(jc.at("horizon"), "/check/horizon");
    }
    if (j.contains("output") && j.at("output").contains("dir"))
        sc.out_dir = j.at("output").at("dir").get<std::string>();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, "cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ScenarioError(path, e.what());
    }
    return scenario_from_json(j);
}

namespace {

Nonlinearity build_nonlinearity(const Scenario& sc) {
    Nonlinearity f = make_nonlinearity(sc.f_key);
    if (sc.alpha) f.alpha = *sc.alpha;
    if (sc.epsilon) f.epsilon = *sc.epsilon;
    if (sc.C0) f.C0 = *sc.C0;
    if (sc.kappa) f.kappa = *sc.kappa;
    if (sc.lambda_pos) f.lambda_pos = *sc.lambda_pos;
    return f;
}

}  // namespace

RunContext prepare_run(const Scenario& sc, bool exploratory) {
    RunContext ctx;
    ctx.sc = sc;
    ctx.exploratory = exploratory || sc.regime == Regime::Exploratory;
    ctx.grid = build_grid(sc.kind, sc.bounds, sc.n);

    ctx.profile.f = build_nonlinearity(sc);
    ctx.profile.zeta = make_coefficient(sc.zeta_key);
    ctx.profile.p = sc.p;
    ctx.profile.zeta.m = (ctx.profile.zeta.tail == TailFlag::BelowOneForever)
                             ? 0.0
                             : compute_m(ctx.profile.zeta, sc.check_range.horizon,
                                         ctx.profile.zeta.tail == TailFlag::Unknown
                                             ? TailFlag::GeOneEventually
                                             : ctx.profile.zeta.tail);

    const Regime check_regime =
        sc.regime == Regime::Exploratory ? Regime::Th1 : sc.regime;
    if (sc.regime != Regime::Exploratory) {
        ctx.assumptions = check_assumptions(ctx.profile.f, ctx.profile.zeta,
                                            check_regime, sc.p, sc.check_range);
        bool hard_fail = false;
        for (const auto& c : ctx.assumptions.checks)
            if (c.status == CheckStatus::Fails) hard_fail = true;
        if (hard_fail && !ctx.exploratory)
            throw std::runtime_error(
                "scenario hypotheses fail for regime " + regime_name(sc.regime) +
                "; rerun in exploratory mode to simulate anyway");
    }

    ctx.eig = principal_eigenpair(ctx.grid, 1e-10);

    if (sc.init_key == "eigen_scaled") {
        const double s = sup_norm(ctx.eig.phi1);
        ctx.u0 = ctx.eig.phi1;
        for (double& v : ctx.u0) v *= sc.init_amplitude / s;
    } else if (sc.init_key == "proposition_cutoff") {
        if (!sc.kappa || !(sc.p > 2.0))
            throw std::runtime_error(
                "proposition_cutoff initial data needs kappa > p > 2");
        const CutoffProfile cut =
            build_cutoff(ctx.grid, sc.cutoff_K, sc.cutoff_order);
        const PropositionLambda pl =
            proposition_lambda(cut, ctx.profile.f, ctx.profile.zeta.zeta(0.0),
                               sc.p, *sc.kappa, ctx.grid);
        ctx.u0 = cut.phi;
        for (double& v : ctx.u0) v *= pl.lambda_star;
    } else if (sc.init_key == "table") {
        ctx.u0 = read_field_csv(sc.table_path, ctx.grid);
    } else {
        throw std::runtime_error("unknown initial data key: " + sc.init_key);
    }
    Field uphi(ctx.u0.size());
    for (size_t k = 0; k < ctx.u0.size(); ++k)
        uphi[k] = ctx.u0[k] * ctx.eig.phi1[k];
    ctx.mass0 = integrate(uphi, ctx.grid);

    if (sc.regime == Regime::Th3 || (ctx.exploratory && sc.p > 2.0))
        ctx.poincare = poincare_constant(ctx.grid, sc.p, 1e-10);

    MonitorConfig& m = ctx.monitor_cfg;
    m.regime = sc.regime;
    m.lambda1 = ctx.eig.lambda1;
    m.p = sc.p;
    m.h2 = std::max(ctx.grid.h[0] * ctx.grid.h[0],
                    ctx.grid.h[1] * ctx.grid.h[1]);
    if (sc.kappa) m.kappa = *sc.kappa;
    if (sc.alpha) m.alpha = *sc.alpha;
    if (ctx.poincare) m.poincare_C = ctx.poincare->C;
    const FunctionalSnapshot s0 =
        snapshot(ctx.u0, 0.0, ctx.profile, ctx.eig, sc.p, ctx.grid);
    m.E0 = (sc.regime == Regime::Th3) ? s0.Ep : s0.E2;
    if (sc.alpha && sc.epsilon && sc.C0)
        m.A = constant_A(*sc.epsilon, *sc.C0, *sc.alpha,
                         ctx.profile.zeta.zeta(0.0), ctx.grid.measure);
    return ctx;
}

std::vector<BoundReport> evaluate_bounds(const RunContext& ctx) {
    std::vector<BoundReport> out;
    const Scenario& sc = ctx.sc;
    const bool all = ctx.exploratory || sc.regime == Regime::Exploratory;

    if (sc.regime == Regime::Th1 || all) {
        try {
            out.push_back(tmax1(ctx.profile.f, ctx.profile.zeta.m,
                                ctx.eig.lambda1, ctx.mass0));
        } catch (const std::exception& e) {
            BoundReport r;
            r.regime = "Th1";
            r.applicable = false;
            r.message = e.what();
            out.push_back(r);
        }
    }
    if (sc.regime == Regime::Th2 || (all && sc.alpha && sc.epsilon && sc.C0)) {
        if (!sc.alpha || !sc.epsilon || !sc.C0)
            throw std::runtime_error("Th2 bound needs alpha, epsilon, C0");
        const FunctionalSnapshot s0 =
            snapshot(ctx.u0, 0.0, ctx.profile, ctx.eig, sc.p, ctx.grid);
        const double A = constant_A(*sc.epsilon, *sc.C0, *sc.alpha,
                                    ctx.profile.zeta.zeta(0.0),
                                    ctx.grid.measure);
        out.push_back(tmax2(s0.E2, lp_norm(ctx.u0, ctx.grid, 2.0), A, *sc.alpha));
    }
    if (sc.regime == Regime::Th3 || (all && ctx.poincare && sc.kappa)) {
        if (!ctx.poincare || !sc.kappa)
            throw std::runtime_error("Th3 bound needs kappa and p > 2");
        const double n2 = lp_norm(ctx.u0, ctx.grid, 2.0);
        out.push_back(tmax3(*ctx.poincare, sc.p, *sc.kappa, 0.5 * n2 * n2));
    }
    return out;
}

VerifyOutcome run_verify(const RunContext& ctx,
                         const std::string& trajectory_csv) {
    SimulationSetup setup;
    setup.profile = ctx.profile;
    setup.eig = ctx.eig;
    setup.p = ctx.sc.p;
    setup.u0 = ctx.u0;
    setup.monitor_cfg = ctx.monitor_cfg;
    setup.controls = ctx.sc.controls;
    setup.trajectory_csv = trajectory_csv;

    SimulationResult sim = simulate(setup, ctx.grid);
    VerifyOutcome out;
    out.verdict = std::move(sim.verdict);
    out.verdict.bounds = evaluate_bounds(ctx);

    for (const auto& b : out.verdict.bounds) {
        if (!b.applicable) continue;
        bool ok = true;
        if (out.verdict.status == BlowupStatus::BlewUp)
            ok = out.verdict.T_obs <= b.T_star + out.verdict.uncertainty;
        out.verdict.consistency[b.regime] = ok;
        if (!ok) out.consistent = false;
    }
    for (const auto& [name, m] : out.verdict.monitors)
        if (!m.passed) out.monitors_passed = false;
    return out;
}

Scenario refine_scenario(const Scenario& sc) {
    Scenario r = sc;
    r.n[0] = 2 * sc.n[0] - 1;
    if (sc.kind == GridKind::Rectangle) r.n[1] = 2 * sc.n[1] - 1;
    return r;
}

}  // namespace blowuplab
