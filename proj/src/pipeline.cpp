#include "selmer/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include "selmer/cache.hpp"
#include "selmer/error.hpp"
#include "selmer/kolyvagin.hpp"

namespace selmer::cli {

const char* tool_version() { return "selmerkit 1.0.0"; }

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> n = {"classify", "class-set", "brandt", "eigenform", "admissible", "period", "predict"};
    return n;
}

namespace {

using kolyvagin::BigInt;

std::string str(const BigInt& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string str(const kolyvagin::BigRational& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Json ideal_json(const quad::Ideal& I) { return {{"label", I.label()}, {"norm", I.norm()}}; }

Json matrix_json(const brandt::Matrix& m) {
    Json j = Json::array();
    for (auto& r : m) j.push_back(r);
    return j;
}

template <int N>
Json class_set_json(const std::string& name, const orders::ClassSet<N>& S) {
    Json w = Json::array();
    kolyvagin::BigRational acc = 0;
    for (auto& c : S.classes) {
        w.push_back(c.weight);
        acc += kolyvagin::BigRational(1, c.weight);
    }
    return {{"op", N == 4 ? "orders.enumerate_classes(Q)" : "orders.enumerate_classes(F)"},
            {"name", name},
            {"D", S.tower->D},
            {"level", S.tower->level_label(S.level)},
            {"size", S.size()},
            {"weights", w},
            {"mass", str(S.mass)},
            {"mass_certified", acc == S.mass}};
}

Json eigenform_json(const std::string& op, const brandt::Eigenform& f) {
    Json tb = Json::array();
    for (auto& [l, a] : f.table) tb.push_back({l, a});
    return {{"op", op}, {"vector", f.vector}, {"weighted", f.weighted}, {"cuspidal", f.cuspidal}, {"eigenvalues", tb}};
}

Json clause_json(const admissible::Clause& c) { return {{"verdict", admissible::to_string(c.verdict)}, {"note", c.note}}; }

Json cert_list(const std::string& op, const std::vector<admissible::AdmissiblePrimeCertificate>& v) {
    Json recs = Json::array();
    for (auto& c : v) recs.push_back(c.record());
    return {{"op", op}, {"count", v.size()}, {"records", recs}};
}

const char* check_str(ec::Check c) { return ec::to_string(c); }

class Run {
public:
    Run(const InstanceConfig* cfg, const RunFlags& fl) : fl_(fl), cache_(fl.cache_dir) {
        if (cfg) {
            cfg_ = *cfg;
            if (fl.p) cfg_->p = *fl.p;
            if (fl.n) cfg_->n = *fl.n;
            if (fl.bound) cfg_->bounds.prime_scan = *fl.bound;
            for (u64 q : fl.exclude) {
                if (!arith::is_prime(q)) fail_pre("cli", "flags", "--exclude entry " + std::to_string(q) + " is not prime");
                cfg_->exclusions.push_back(q);
            }
            if (cfg_->n < 1) fail_pre("cli", "flags", "--n must be positive");
            if (!arith::is_prime(cfg_->p)) fail_pre("cli", "flags", "--p must be prime");
        }
    }

    ReportDocument run(const std::string& name) {
        if (name == "classify") classify();
        else if (name == "class-set") class_sets();
        else if (name == "brandt") brandt_section();
        else if (name == "eigenform") eigenforms();
        else if (name == "admissible") admissible_scan();
        else if (name == "period") period();
        else if (name == "predict") predict();
        else fail_pre("cli", "run_command", "unknown command " + name);
        finish(name);
        return std::move(doc_);
    }

private:
    RunFlags fl_;
    std::optional<InstanceConfig> cfg_;
    Cache cache_;
    ReportDocument doc_;
    Json timing_ = Json::object();
    std::optional<admissible::PairContext> ctx_;
    std::size_t asq_loaded_ = 0;
    std::string asq_key_;
    std::optional<kolyvagin::PeriodSetup> setup_;
    std::optional<kolyvagin::PeriodReport> period_;

    using Clock = std::chrono::steady_clock;

    template <class Fn>
    auto timed(const std::string& stage, Fn&& fn) {
        auto t0 = Clock::now();
        struct Done {
            Run* r;
            std::string s;
            Clock::time_point t0;
            ~Done() { r->timing_[s] = std::chrono::duration<double>(Clock::now() - t0).count(); }
        } done{this, stage, t0};
        return fn();
    }

    const InstanceConfig& cfg(const char* op) {
        if (!cfg_) fail_pre("cli", op, "this command needs --config");
        return *cfg_;
    }

    Json math_inputs() {
        const auto& c = cfg("run_command");
        Json j = c.to_json();
        return {{"field", j["field"]}, {"curveE", j["curveE"]}, {"curveA", j["curveA"]}};
    }

    admissible::PairContext& ctx() {
        if (ctx_) return *ctx_;
        const auto& c = cfg("context");
        ctx_ = timed("classify", [&] { return admissible::make_context(c.E, c.A, c.field(), 500, c.exclusions); });
        Json k = {{"field", c.field_d}, {"curveA", math_inputs()["curveA"]}};
        asq_key_ = Cache::key_of(k);
        cache_.touch("trace_asq", asq_key_);
        if (auto j = cache_.load("trace_asq", asq_key_)) {
            try {
                for (auto& e : *j) ctx_->asq_cache->emplace(e.at(0).get<u64>(), e.at(1).get<i64>());
            } catch (const std::exception& e) {
                ctx_->asq_cache->clear();
                cache_.warn(std::string("trace table rejected (") + e.what() + "), recomputing");
            }
        }
        asq_loaded_ = ctx_->asq_cache->size();
        return *ctx_;
    }

    std::optional<ec::AssumptionE> ae_;
    const ec::AssumptionE& assumption_E() {
        if (!ae_) {
            auto& x = ctx();
            ae_ = timed("assumption_E", [&] { return ec::check_assumption_E(cfg_->E, cfg_->A, x.F, 500); });
        }
        return *ae_;
    }

    ec::Parity parity() { return ec::parity_from_minus(ctx().n_minus); }

    void classify() {
        auto& x = ctx();
        const auto& c = *cfg_;
        const auto& ae = assumption_E();
        Json cl = {{"op", "elliptic.classify_pair"},
                   {"kind", ec::to_string(x.pc.kind)},
                   {"confidence", x.pc.confidence},
                   {"primes_scanned", x.pc.primes_scanned},
                   {"note", x.pc.note}};
        cl["asai_character_disc"] = x.pc.asai_character_disc ? Json(*x.pc.asai_character_disc) : Json();
        cl["breve_eta_trivial"] = x.pc.breve_eta_is_trivial ? Json(*x.pc.breve_eta_is_trivial) : Json();
        cl["assumption_E"] = {{"op", "elliptic.check_assumption_E"},
                              {"E1", check_str(ae.e1)},
                              {"E2", check_str(ae.e2)},
                              {"E3", check_str(ae.e3)},
                              {"note", ae.note}};
        doc_.sections["classification"] = cl;
        auto par = parity();
        Json sig = Json::array();
        for (u64 v : ec::sigma_set_from_minus(x.n_minus)) sig.push_back(v == 0 ? Json("inf") : Json(v));
        auto sc = quad::split_conductor(c.E.conductor, x.F);
        doc_.sections["parity"] = {{"op", "elliptic.parity"},
                                   {"type", par.type == ec::ParityType::even ? "even" : "odd"},
                                   {"epsilon", par.epsilon},
                                   {"n_plus", sc.plus},
                                   {"n_minus", sc.minus},
                                   {"sigma_set", sig},
                                   {"conductor_A", ideal_json(*c.A.conductor_ideal)}};
    }

    Json tower_key(const orders::TowerQ& T) { return {{"set", "T"}, {"D", T.D}, {"top", T.level_norm(T.top)}}; }

    std::shared_ptr<const orders::ClassSetT> classes_T(std::shared_ptr<const orders::TowerQ> T, const orders::Level& lv,
                                                       std::size_t budget) {
        return cached_classes<4>(cache_, T, lv, tower_key(*T), budget);
    }

    std::shared_ptr<const orders::ClassSetS> classes_S(std::shared_ptr<const orders::TowerF> T, const orders::Level& lv,
                                                       std::size_t budget) {
        // a TowerF is the base change of build_tower(D, top) to F
        Json k = {{"set", "S"}, {"d", T->field->d}, {"D", T->D}, {"top", T->level_norm(T->top)}};
        return cached_classes<8>(cache_, T, lv, k, budget);
    }

    brandt::Eigenform cached_form(const std::string& kind, u64 bound, const std::function<brandt::Eigenform()>& compute) {
        Json k = math_inputs();
        k["form"] = kind;
        std::string key = Cache::key_of(k);
        cache_.touch("eigenform", key);
        if (auto j = cache_.load("eigenform", key)) {
            try {
                if (j->at("bound").get<u64>() == bound) return decode_eigenform(j->at("form"));
            } catch (const std::exception& e) {
                cache_.warn(std::string("eigenform record rejected (") + e.what() + "), recomputing");
            }
        }
        auto f = compute();
        cache_.store("eigenform", key, {{"bound", bound}, {"form", encode_eigenform(f)}});
        return f;
    }

    kolyvagin::PeriodSetup& setup() {
        if (setup_) return *setup_;
        auto& x = ctx();
        const auto& c = *cfg_;
        if (parity().type != ec::ParityType::even)
            fail_pre("cli", "period", "period sums need even type (an odd number of primes in N^-)");
        kolyvagin::SetupBounds b;
        b.hecke_verify = c.bounds.hecke_verify;
        b.hecke_verify_F = c.bounds.hecke_verify_F;
        b.neighbor_budget = c.bounds.neighbor_budget;
        b.class_set_T = [this, &c](auto T, const orders::Level& lv) { return classes_T(T, lv, c.bounds.neighbor_budget); };
        b.class_set_S = [this, &c](auto T, const orders::Level& lv) { return classes_S(T, lv, c.bounds.neighbor_budget); };
        b.form = [this, &c](const std::string& kind, const std::function<brandt::Eigenform()>& compute) {
            return cached_form(kind, kind == "g" ? c.bounds.hecke_verify : c.bounds.hecke_verify_F, compute);
        };
        setup_ = timed("setup", [&] { return kolyvagin::prepare_period(x, *c.A.conductor_ideal, b); });
        return *setup_;
    }

    // odd type: the first n-admissible prime and the form raised to level N^- l
    struct Raised {
        admissible::AdmissiblePrimeCertificate cert;
        std::shared_ptr<const orders::ClassSetT> cs;
        brandt::ModPnEigenform form;
    };
    std::optional<Raised> raised_;
    bool raised_tried_ = false;

    std::optional<Raised>& raised() {
        if (raised_tried_) return raised_;
        raised_tried_ = true;
        auto& x = ctx();
        const auto& c = *cfg_;
        auto adm = timed("scan_n_admissible", [&] { return admissible::scan_n_admissible(x, c.p, c.n, c.bounds.prime_scan); });
        if (adm.empty()) return raised_;
        Raised r{adm.front(), nullptr, {}};
        i64 n_plus = quad::split_conductor(c.E.conductor, x.F).plus;
        auto T = orders::build_tower(x.n_minus * static_cast<i64>(r.cert.ell), n_plus);
        r.cs = timed("raised_class_set", [&] { return classes_T(T, T->top, c.bounds.neighbor_budget); });
        u64 vb = c.bounds.hecke_verify ? c.bounds.hecke_verify : 60;
        r.form = timed("level_raise", [&] {
            return brandt::level_raise(c.E, n_plus, x.n_minus, r.cert.ell, c.p, c.n, r.cert.epsilon_sigma, vb, r.cs);
        });
        raised_ = std::move(r);
        return raised_;
    }

    void class_sets() {
        Json sets = Json::array();
        if (fl_.D) {
            i64 M = fl_.M.value_or(1);
            auto T = orders::build_tower(*fl_.D, M);
            auto S = timed("class_set", [&] { return classes_T(T, T->top, cfg_ ? cfg_->bounds.neighbor_budget : 50000); });
            Json j = class_set_json("T(" + std::to_string(M) + ", " + std::to_string(*fl_.D) + ")", *S);
            j["mass_oracle"] = str(orders::mass_T(*fl_.D, M));
            Json units = Json::array();
            for (auto& cl : S->classes) units.push_back(cl.unit_count);
            j["unit_counts"] = units;
            sets.push_back(j);
        } else if (parity().type == ec::ParityType::even) {
            auto& s = setup();
            sets.push_back(class_set_json("T(N+M, N-)", *s.T_top));
            sets.push_back(class_set_json("T(N+, N-)", *s.T_base));
            sets.push_back(class_set_json("S(N+M)", *s.S_top));
            sets.push_back(class_set_json("S(M)", *s.S_M));
        } else {
            auto& r = raised();
            if (r) sets.push_back(class_set_json("T(N+, N- l) at l = " + std::to_string(r->cert.ell), *r->cs));
        }
        Json out = {{"op", "orders.class_sets"}, {"sets", sets}};
        if (!fl_.D && parity().type == ec::ParityType::odd && !raised_)
            out["note"] = "odd type: no n-admissible prime within the scan bound, so no definite level to enumerate";
        doc_.sections["class_sets"] = out;
    }

    void brandt_section() {
        Json mats = Json::array();
        auto add = [&](const std::string& set, auto& mod, auto keys, auto labels) {
            mod.prepare(keys);
            for (std::size_t i = 0; i < keys.size(); ++i)
                mats.push_back({{"set", set}, {"prime", labels[i]}, {"matrix", matrix_json(mod.matrix(keys[i]))}});
        };
        u64 qb = fl_.bound.value_or(7);
        if (fl_.D) {
            i64 M = fl_.M.value_or(1);
            auto T = orders::build_tower(*fl_.D, M);
            brandt::BrandtT mod(classes_T(T, T->top, cfg_ ? cfg_->bounds.neighbor_budget : 50000));
            std::vector<orders::Central> keys;
            std::vector<std::string> labels;
            for (u64 v = 2; v <= qb; v = arith::next_prime(v))
                if (!mod.divides_level(brandt::prime_key(v)) && M % static_cast<i64>(v) != 0) {
                    keys.push_back(brandt::prime_key(v));
                    labels.push_back(std::to_string(v));
                }
            timed("brandt", [&] { add("T(" + std::to_string(M) + ", " + std::to_string(*fl_.D) + ")", mod, keys, labels); return 0; });
        } else {
            auto& s = setup();
            brandt::BrandtT mt(s.T_base);
            std::vector<orders::Central> keys;
            std::vector<std::string> labels;
            for (u64 v = 2; v <= qb; v = arith::next_prime(v))
                if (!mt.divides_level(brandt::prime_key(v)) && s.n_plus % static_cast<i64>(v) != 0) {
                    keys.push_back(brandt::prime_key(v));
                    labels.push_back(std::to_string(v));
                }
            brandt::BrandtS ms(s.S_M);
            std::vector<orders::Central> fk;
            std::vector<std::string> fl;
            for (auto& P : quad::primes_up_to_norm(ctx().F, qb)) {
                auto k = brandt::prime_key(ctx().F, P);
                if (ms.divides_level(k)) continue;
                fk.push_back(k);
                fl.push_back(P.label());
            }
            timed("brandt", [&] {
                add("T(N+, N-)", mt, keys, labels);
                add("S(M)", ms, fk, fl);
                return 0;
            });
        }
        doc_.sections["brandt"] = {{"op", "brandt.matrix"}, {"prime_bound", qb}, {"matrices", mats}};
    }

    void eigenforms() {
        Json e = Json::object();
        if (parity().type == ec::ParityType::even) {
            e["op"] = "kolyvagin.prepare_period";
            auto& s = setup();
            e["g"] = eigenform_json("brandt.eigenform_from_traces", s.g);
            e["f"] = eigenform_json("brandt.eigenform_pi", s.f);
        } else {
            e["op"] = "brandt.level_raise";
            auto& r = raised();
            if (r) {
                const auto& f = r->form;
                e["raised"] = {{"op", "brandt.level_raise"},
                               {"ell", r->cert.ell},
                               {"modulus", f.modulus},
                               {"op_sign", f.op_sign},
                               {"rank", 1},
                               {"vector", f.vector},
                               {"verified_primes", f.verified}};
            } else {
                e["raised"] = {{"op", "brandt.level_raise"}, {"note", "no n-admissible prime within the scan bound"}};
            }
        }
        doc_.sections["eigenforms"] = e;
    }

    // admissible scans are shared by several sections
    std::optional<std::vector<admissible::AdmissiblePrimeCertificate>> adm_, plus_, minus_;

    void run_scans() {
        if (adm_) return;
        auto& x = ctx();
        const auto& c = *cfg_;
        timed("scans", [&] {
            adm_ = admissible::scan_n_admissible(x, c.p, c.n, c.bounds.prime_scan);
            plus_ = admissible::scan_strongly_admissible(x, c.p, c.n, 1, c.bounds.prime_scan);
            minus_ = admissible::scan_strongly_admissible(x, c.p, c.n, -1, c.bounds.prime_scan);
            return 0;
        });
    }

    admissible::GoodPrimeReport good_;

    void admissible_scan() {
        auto& x = ctx();
        const auto& c = *cfg_;
        good_ = timed("good_prime", [&] { return admissible::good_prime_report(x, c.p, std::min<u64>(c.bounds.prime_scan, 1000)); });
        Json gp = {{"op", "admissible.good_prime_report"}, {"p", c.p}};
        for (auto& [k, cl] : good_.clauses) gp[k] = clause_json(cl);
        run_scans();
        auto R = timed("assumption_R", [&] { return admissible::check_assumption_R(x, c.p, c.bounds.prime_scan); });
        Json rj = {{"op", "admissible.check_assumption_R"}};
        for (auto& [k, cl] : R.clauses) rj[k] = clause_json(cl);
        doc_.sections["admissible_scan"] = {
            {"op", "admissible.scan"},
            {"p", c.p},
            {"n", c.n},
            {"bound", c.bounds.prime_scan},
            {"auxiliary_prime", admissible::auxiliary_prime(x, c.p)},
            {"record_format", "ell, n, eps_sigma, eps, clause bitmap (A1..A5 = bits 0..4, S2 = 5, S3 = 6)"},
            {"good_prime", gp},
            {"n_admissible", cert_list("admissible.scan_n_admissible", *adm_)},
            {"strong_plus", cert_list("admissible.scan_strongly_admissible(+)", *plus_)},
            {"strong_minus", cert_list("admissible.scan_strongly_admissible(-)", *minus_)},
            {"assumption_R", rj}};
    }

    void period() {
        auto& s = setup();
        period_ = timed("period", [&] { return kolyvagin::find_testing_factors(s); });
        Json ents = Json::array();
        for (auto& e : period_->entries) {
            BigInt rep = kolyvagin::replay_entry(s, e);
            if (rep != e.value) fail_internal("kolyvagin", "replay_entry", "replayed period sum differs");
            ents.push_back({{"d", e.d}, {"dd", e.dd_label}, {"value", str(e.value)}});
        }
        Json j = {{"op", "kolyvagin.find_testing_factors"},
                  {"level_plus", period_->level_plus},
                  {"n_minus", period_->n_minus},
                  {"entries", ents},
                  {"replay", "all entries agree with the reversed summation"}};
        j["chosen"] = period_->chosen ? Json(*period_->chosen) : Json();
        if (!period_->note.empty()) j["note"] = period_->note;
        doc_.sections["period"] = j;
    }

    void predict() {
        classify();
        const auto& c = *cfg_;
        auto& x = ctx();
        bool even = parity().type == ec::ParityType::even;
        class_sets();
        eigenforms();
        admissible_scan();
        kolyvagin::PredictInputs in;
        in.type = parity().type;
        in.classification_heuristic = x.pc.confidence != "proven-at-bound";
        in.n_bad = c.n_bad;
        in.n_red = c.n_red;
        in.assumption_E = assumption_E().ok();
        for (auto& [k, cl] : good_.clauses) {
            if (cl.verdict == admissible::Verdict::fail) in.failed_clauses.push_back(k + " (" + cl.note + ")");
            if (cl.verdict == admissible::Verdict::inconclusive) in.extra.push_back(k + " inconclusive: " + cl.note);
        }
        in.extra.push_back("A1 checked against the finite surrogate modulus");
        Json ev = Json::array();
        Json kc;
        if (even) {
            period();
            in.period = &*period_;
            auto k = timed("constants", [&] {
                return kolyvagin::constants(x, c.p, c.n, c.bounds.prime_scan, &*period_, c.n_bad, c.n_red);
            });
            kc = {{"op", "kolyvagin.constants"},
                  {"admissible_seen", k.admissible_seen},
                  {"strong_seen", k.strong_seen},
                  {"n_bad", k.n_bad},
                  {"n_red", k.n_red}};
            kc["n_div"] = k.n_div ? Json(*k.n_div) : Json();
            kc["n_den"] = k.n_den ? Json(*k.n_den) : Json();
            kc["density_estimate"] = k.density_estimate ? Json(str(*k.density_estimate)) : Json();
            if (!k.note.empty()) kc["note"] = k.note;
            if (period_->chosen) {
                const BigInt& per = period_->entries[*period_->chosen].value;
                std::vector<admissible::AdmissiblePrimeCertificate> firsts;
                for (auto* v : {&*plus_, &*minus_})
                    for (std::size_t i = 0; i < v->size() && i < 2; ++i) firsts.push_back((*v)[i]);
                for (auto& cert : firsts) {
                    i64 tr = admissible::trace_Asq(x, cert.ell);
                    for (auto nu : {std::pair<i64, i64>{1, 0}, {0, 1}}) {
                        u64 val = kolyvagin::congruence_rhs_bis(cert.ell, nu.first, nu.second, tr, cert.epsilon_sigma, per, c.p, c.n);
                        ev.push_back({{"op", "kolyvagin.congruence_rhs_bis"},
                                      {"ell", cert.ell},
                                      {"eps", cert.strong->epsilon},
                                      {"eps_sigma", cert.epsilon_sigma},
                                      {"nu", {nu.first, nu.second}},
                                      {"trace_A_ell2", tr},
                                      {"value_mod_pn", val}});
                    }
                }
            }
        } else {
            kc = {{"op", "kolyvagin.constants"},
                  {"n_bad", c.n_bad},
                  {"n_red", c.n_red},
                  {"note", "odd type: n_div needs the Abel-Jacobi class and is not computed"}};
            kc["n_div"] = Json();
            kc["n_den"] = Json();
            auto& r = raised();
            ev.push_back({{"op", "kolyvagin.congruence_rhs_even"},
                          {"skipped", true},
                          {"ell1", r ? Json(r->cert.ell) : Json()},
                          {"reason", "not attempted: the raised period sum needs class sets over F ramified at l1, whose "
                                     "mass grows like l1^2 times the base mass, beyond the default neighbor budget"}});
        }
        doc_.sections["kolyvagin_constants"] = kc;
        doc_.sections["congruence_evaluations"] = {{"op", "kolyvagin.congruence"}, {"entries", ev}};
        auto v = kolyvagin::predict(in, c.p);
        doc_.sections["verdict"] = {{"op", "kolyvagin.predict"}, {"status", v.status}, {"text", v.text}, {"assumptions", v.assumptions}};
    }

    void finish(const std::string& name) {
        if (ctx_ && ctx_->asq_cache->size() != asq_loaded_) {
            Json t = Json::array();
            for (auto [l, a] : *ctx_->asq_cache) t.push_back({l, a});
            cache_.store("trace_asq", asq_key_, t);
        }
        Json keys = Json::array();
        for (auto& [k, kind] : cache_.used()) keys.push_back(k);
        doc_.provenance = {{"tool_version", tool_version()}, {"command", name}, {"cache_keys", keys}};
        if (cfg_) doc_.provenance["config_hash"] = sha256_hex(cfg_->to_json().dump());
        if (fl_.D) doc_.provenance["D"] = *fl_.D;
        if (fl_.M) doc_.provenance["M"] = *fl_.M;
        if (fl_.timing) doc_.timing = timing_;
    }
};

}  // namespace

ReportDocument run_command(const std::string& name, const InstanceConfig* cfg, const RunFlags& flags) {
    if (std::find(command_names().begin(), command_names().end(), name) == command_names().end())
        fail_pre("cli", "run_command", "unknown command " + name);
    if (!cfg && !((name == "class-set" || name == "brandt") && flags.D))
        fail_pre("cli", "run_command", name + " needs --config" + (name == "class-set" || name == "brandt" ? " or --D" : ""));
    Run r(cfg, flags);
    return r.run(name);
}

}  // namespace selmer::cli
