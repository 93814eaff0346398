#include "bulkq/json_io.hpp"

#include <fstream>
#include <set>

namespace bulkq {

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!obj.is_object()) raise(errc::bad_input, where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            raise(errc::bad_input, "unknown key \"" + it.key() + "\" in " + where);
    }
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) raise(errc::bad_input, where + " missing \"" + key + "\"");
    if (!obj[key].is_number()) raise(errc::bad_input, where + "." + key + " must be a number");
    return obj[key].get<double>();
}

int need_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) raise(errc::bad_input, where + " missing \"" + key + "\"");
    if (!obj[key].is_number_integer())
        raise(errc::bad_input, where + "." + key + " must be an integer");
    return obj[key].get<int>();
}

std::vector<double> need_array(const json& obj, const std::string& key,
                               const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_array())
        raise(errc::bad_input, where + " missing array \"" + key + "\"");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) raise(errc::bad_input, where + "." + key + " entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

ServiceTimeDist dist_from_json(const json& d, const std::string& where) {
    if (!d.is_object() || !d.contains("kind"))
        raise(errc::bad_input, where + " must be an object with \"kind\"");
    std::string kind = d["kind"].get<std::string>();
    if (kind == "geometric") {
        require_keys(d, {"kind", "p"}, where);
        return ServiceTimeDist::geometric(need_number(d, "p", where));
    }
    if (kind == "negbinomial") {
        require_keys(d, {"kind", "r", "mu"}, where);
        return ServiceTimeDist::neg_binomial(need_int(d, "r", where),
                                             need_number(d, "mu", where));
    }
    if (kind == "phasetype") {
        require_keys(d, {"kind", "beta", "T"}, where);
        std::vector<double> beta = need_array(d, "beta", where);
        if (!d.contains("T") || !d["T"].is_array())
            raise(errc::bad_input, where + " missing matrix \"T\"");
        std::vector<std::vector<double>> T;
        for (const auto& row : d["T"]) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(v.get<double>());
            T.push_back(std::move(r));
        }
        return ServiceTimeDist::phase_type(std::move(beta), std::move(T));
    }
    if (kind == "deterministic") {
        require_keys(d, {"kind", "d"}, where);
        return ServiceTimeDist::deterministic(need_int(d, "d", where));
    }
    if (kind == "empirical") {
        require_keys(d, {"kind", "pmf"}, where);
        return ServiceTimeDist::empirical(need_array(d, "pmf", where));
    }
    raise(errc::bad_input, where + ": unknown kind \"" + kind + "\"");
}

json dist_to_json(const ServiceTimeDist& dist) {
    json d;
    d["kind"] = dist.kind_name();
    std::visit(
        [&](const auto& v) {
            using D = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<D, GeometricDist>) {
                d["p"] = v.p;
            } else if constexpr (std::is_same_v<D, NegBinomialDist>) {
                d["r"] = v.r;
                d["mu"] = v.mu;
            } else if constexpr (std::is_same_v<D, PhaseTypeDist>) {
                d["beta"] = v.beta;
                d["T"] = v.T;
            } else if constexpr (std::is_same_v<D, DeterministicDist>) {
                d["d"] = v.d;
            } else {
                d["pmf"] = v.pmf;
            }
        },
        dist.law);
    return d;
}

} // namespace

ValidatedModel model_from_json(const json& doc) {
    require_keys(doc, {"arrival", "service", "vacation"}, "model");
    if (!doc.contains("arrival") || !doc.contains("service") || !doc.contains("vacation"))
        raise(errc::bad_input, "model document needs arrival, service and vacation sections");

    const json& arr = doc["arrival"];
    require_keys(arr, {"lambda", "g"}, "arrival");
    BatchArrivalSpec arrival;
    arrival.lambda = need_number(arr, "lambda", "arrival");
    arrival.g = need_array(arr, "g", "arrival");

    const json& svc = doc["service"];
    require_keys(svc, {"a", "b", "dists"}, "service");
    ServicePolicy service;
    service.a = need_int(svc, "a", "service");
    service.b = need_int(svc, "b", "service");
    if (!svc.contains("dists") || !svc["dists"].is_array())
        raise(errc::bad_input, "service.dists must be an array");
    std::map<int, ServiceTimeDist> by_size;
    for (const auto& entry : svc["dists"]) {
        if (!entry.is_object() || !entry.contains("size"))
            raise(errc::bad_input, "each service dist needs a \"size\"");
        int size = entry["size"].get<int>();
        if (by_size.count(size))
            raise(errc::bad_input, "duplicate service dist for size " + std::to_string(size));
        json body = entry;
        body.erase("size");
        by_size.emplace(size, dist_from_json(body, "service.dists[" + std::to_string(size) + "]"));
    }
    if (service.a < 1 || service.a > service.b)
        raise(errc::bad_threshold, "need 1 <= a <= b in the service section");
    for (int i = service.a; i <= service.b; ++i) {
        auto it = by_size.find(i);
        if (it == by_size.end())
            raise(errc::bad_input, "no service law for batch size " + std::to_string(i));
        service.dists.push_back(it->second);
    }
    if ((int)by_size.size() != service.b - service.a + 1)
        raise(errc::bad_input, "service dists outside [a, b] present");

    const json& vac = doc["vacation"];
    require_keys(vac, {"mode", "dist"}, "vacation");
    VacationSpec vacation;
    std::string mode = vac.contains("mode") ? vac["mode"].get<std::string>() : "";
    if (mode == "single")
        vacation.mode = VacationSpec::Mode::single;
    else if (mode == "multiple")
        vacation.mode = VacationSpec::Mode::multiple;
    else
        raise(errc::bad_input, "vacation.mode must be \"single\" or \"multiple\"");
    if (!vac.contains("dist")) raise(errc::bad_input, "vacation needs a dist");
    vacation.dist = dist_from_json(vac["dist"], "vacation.dist");

    return validate_model(arrival, service, vacation);
}

json model_to_json(const ValidatedModel& model) {
    json doc;
    doc["arrival"] = {{"lambda", model.arrival.lambda}, {"g", model.arrival.g}};
    json dists = json::array();
    for (int i = model.service.a; i <= model.service.b; ++i) {
        json d = dist_to_json(model.service.dist_for(i));
        d["size"] = i;
        dists.push_back(d);
    }
    doc["service"] = {{"a", model.service.a}, {"b", model.service.b}, {"dists", dists}};
    doc["vacation"] = {
        {"mode", model.vacation.mode == VacationSpec::Mode::single ? "single" : "multiple"},
        {"dist", dist_to_json(model.vacation.dist)}};
    return doc;
}

ValidatedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::bad_input, "cannot open model file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        raise(errc::bad_input, "malformed JSON in " + path + ": " + e.what());
    }
    return model_from_json(doc);
}

json solve_result_to_json(const SolveResult& res) {
    json out;
    out["model"] = model_to_json(res.model);
    out["rho"] = res.model.rho;
    out["delta_p"] = res.model.delta_p();

    out["boundary"] = {{"p_plus_head", res.boundary.p_plus_head},
                       {"q_plus_head", res.boundary.q_plus_head}};

    const auto& dep = res.departure;
    json depj;
    depj["a"] = dep.a;
    depj["b"] = dep.b;
    depj["n_max"] = dep.n_max;
    depj["p_joint"] = dep.p_joint;
    depj["q_term"] = dep.q_term;
    depj["p_plus"] = std::vector<double>(dep.p_plus.begin(), dep.p_plus.begin() + dep.n_max + 1);
    depj["col_sums"] = dep.col_sums;
    depj["C"] = dep.C;
    depj["p_plus_total"] = dep.p_plus_total;
    depj["q_plus_total"] = dep.q_plus_total;
    depj["normalization"] = dep.normalization;
    out["departure"] = depj;

    const auto& arb = res.arbitrary;
    json arbj;
    arbj["n_max"] = arb.n_max;
    arbj["p_dormant"] = arb.p_dormant;
    arbj["p_joint"] = arb.p_joint;
    arbj["q_vac"] = arb.q_vac;
    arbj["e_star"] = arb.e_star;
    arbj["col_sums"] = arb.col_sums;
    arbj["total_mass"] = arb.total_mass;
    out["arbitrary"] = arbj;

    out["rates"] = {{"tau", res.rates.tau}, {"omega", res.rates.omega},
                    {"e_star", res.rates.e_star}};

    out["marginals"] = {{"p_sys", res.marg.p_sys},
                        {"p_queue", res.marg.p_queue},
                        {"p_ser", res.marg.p_ser},
                        {"P_busy", res.marg.P_busy},
                        {"Q_vac", res.marg.Q_vac},
                        {"P_dor", res.marg.P_dor}};

    out["measures"] = {{"L", res.report.L},       {"L_q", res.report.L_q},
                       {"L_s", res.report.L_s},   {"W", res.report.W},
                       {"W_q", res.report.W_q},   {"L_q_plus", res.report.L_q_plus},
                       {"P_busy", res.report.P_busy}, {"Q_vac", res.report.Q_vac},
                       {"P_dor", res.report.P_dor}};
    out["lq_plus"] = {{"printed_formula", res.lqp.printed_formula},
                      {"completions_only", res.lqp.completions_only},
                      {"with_vacations", res.lqp.with_vacations}};

    json roots = json::array();
    for (const auto& r : res.croots.roots) {
        roots.push_back({{"re", r.value.real()},
                         {"im", r.value.imag()},
                         {"multiplicity", r.multiplicity},
                         {"region", r.region == RootRegion::inside
                                        ? "inside"
                                        : (r.region == RootRegion::on_circle ? "on_circle"
                                                                             : "outside")}});
    }
    out["diagnostics"] = {{"roots", roots},
                          {"condition_number", res.diag.condition_number},
                          {"max_root_residual", res.diag.max_root_residual},
                          {"max_cancel_residual", res.diag.max_cancel_residual},
                          {"departure_defect", res.diag.departure_defect},
                          {"mass_defect", res.diag.mass_defect},
                          {"rate_identity_defect", res.diag.rate_identity_defect},
                          {"warnings", res.diag.warnings}};
    return out;
}

json empirical_to_json(const EmpiricalReport& rep) {
    json out;
    out["a"] = rep.a;
    out["b"] = rep.b;
    out["delta_p"] = rep.delta_p;
    out["replications"] = rep.replications;
    out["measured_slots"] = rep.measured_slots;
    out["seed"] = rep.seed;
    out["horizon"] = rep.horizon;
    out["warmup"] = rep.warmup;
    out["departures_events"] = rep.departures_events;
    out["vacation_end_events"] = rep.vacation_end_events;
    out["arb_dormant"] = rep.arb_dormant;
    out["arb_vacation"] = rep.arb_vacation;
    out["arb_busy"] = rep.arb_busy;
    out["dep_joint"] = rep.dep_joint;
    out["vac_end"] = rep.vac_end;
    out["pre_arrival_queue"] = rep.pre_arrival_queue;
    auto scalar = [](const ScalarEstimate& e) {
        return json{{"mean", e.mean}, {"std_error", e.std_error}, {"per_rep", e.per_rep}};
    };
    out["L"] = scalar(rep.L);
    out["L_q"] = scalar(rep.L_q);
    out["P_busy"] = scalar(rep.P_busy);
    out["Q_vac"] = scalar(rep.Q_vac);
    out["P_dor"] = scalar(rep.P_dor);
    out["tau_hat"] = scalar(rep.tau_hat);
    return out;
}

json comparison_to_json(const ComparisonReport& rep) {
    json cells = json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"name", c.name},
                         {"analytic", c.analytic},
                         {"empirical", c.empirical},
                         {"std_error", c.std_error},
                         {"z", c.z}});
    return json{{"cells", cells},
                {"n_tests", rep.n_tests},
                {"alpha", rep.alpha},
                {"z_crit", rep.z_crit},
                {"max_abs_z", rep.max_abs_z},
                {"n_beyond_3sigma", rep.n_beyond_3sigma},
                {"pass", rep.pass}};
}

} // namespace bulkq
