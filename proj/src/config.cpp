#include "selmer/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "selmer/error.hpp"

namespace selmer::cli {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    fail_pre("cli", "config", path + ": " + msg);
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) bad(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

const Json& need(const Json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) bad(path.empty() ? key : path + "." + key, "missing");
    return j.at(key);
}

i64 as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<i64>();
}

u64 as_count(const Json& j, const std::string& path) {
    i64 v = as_int(j, path);
    if (v < 0) bad(path, "must be nonnegative");
    return static_cast<u64>(v);
}

// downstream precondition errors are re-raised with the field path in front
template <class Fn>
void under(const std::string& path, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::precondition) throw;
        bad(path, e.what());
    }
}

}  // namespace

quad::RealQuadraticField InstanceConfig::field() const { return quad::make_field(field_d); }

quad::Ideal InstanceConfig::conductor_A() const {
    auto F = field();
    quad::Ideal I;
    for (auto [q, e] : arith::factor(A.conductor_norm).factors) {
        (void)e;
        for (auto& P : quad::primes_above(F, q))
            if (!ec::good_at(F, A, P)) I.factors.push_back({P, 1});
    }
    return I;
}

Json InstanceConfig::to_json() const {
    Json j;
    j["name"] = name;
    j["field"] = {{"d", field_d}};
    j["curveE"] = {{"a", E.a}, {"conductor", E.conductor}};
    Json aa = Json::array();
    for (auto& c : A.a) aa.push_back({c.x, c.y});
    j["curveA"] = {{"a", aa}, {"conductor_norm", A.conductor_norm}};
    j["p"] = p;
    j["n"] = n;
    j["bounds"] = {{"prime_scan", bounds.prime_scan},
                   {"hecke_verify", bounds.hecke_verify},
                   {"hecke_verify_F", bounds.hecke_verify_F},
                   {"neighbor_budget", bounds.neighbor_budget}};
    j["assumptions"] = {{"n_bad", n_bad}, {"n_red", n_red}};
    j["exclusions"] = exclusions;
    return j;
}

InstanceConfig parse_config(const Json& j) {
    only_keys(j, "", {"name", "field", "curveE", "curveA", "p", "n", "bounds", "assumptions", "exclusions"});
    InstanceConfig c;
    if (j.contains("name")) {
        if (!j["name"].is_string()) bad("name", "expected a string");
        c.name = j["name"].get<std::string>();
    }

    const Json& f = need(j, "", "field");
    only_keys(f, "field", {"d"});
    c.field_d = as_int(need(f, "field", "d"), "field.d");
    quad::RealQuadraticField F;
    under("field.d", [&] { F = quad::make_field(c.field_d); });
    if (F.narrow_class_number() != 1) bad("field.d", "narrow class number must be 1");

    const Json& e = need(j, "", "curveE");
    only_keys(e, "curveE", {"a", "conductor"});
    const Json& ea = need(e, "curveE", "a");
    if (!ea.is_array() || ea.size() != 5) bad("curveE.a", "expected five integers");
    for (int i = 0; i < 5; ++i) c.E.a[i] = as_int(ea[i], "curveE.a[" + std::to_string(i) + "]");
    c.E.conductor = as_int(need(e, "curveE", "conductor"), "curveE.conductor");
    under("curveE", [&] { ec::validate_conductor(c.E, 500); });

    const Json& a = need(j, "", "curveA");
    only_keys(a, "curveA", {"a", "conductor_norm"});
    const Json& aa = need(a, "curveA", "a");
    if (!aa.is_array() || aa.size() != 5) bad("curveA.a", "expected five coefficient pairs");
    for (int i = 0; i < 5; ++i) {
        std::string pth = "curveA.a[" + std::to_string(i) + "]";
        if (!aa[i].is_array() || aa[i].size() != 2) bad(pth, "expected a pair [x, y] for x + y*omega");
        c.A.a[i] = {as_int(aa[i][0], pth + "[0]"), as_int(aa[i][1], pth + "[1]")};
    }
    c.A.conductor_norm = as_int(need(a, "curveA", "conductor_norm"), "curveA.conductor_norm");
    if (c.A.conductor_norm < 1) bad("curveA.conductor_norm", "must be positive");
    under("curveA.a", [&] {
        auto d = ec::invariants(F, c.A).disc;
        if (d.x == 0 && d.y == 0) fail_pre("elliptic", "invariants", "singular curve");
    });
    {
        quad::Ideal I;
        under("curveA.conductor_norm", [&] { I = c.conductor_A(); });
        for (auto& [P, ex] : I.factors)
            if (P.kind == quad::Splitting::ramified) bad("curveA.conductor_norm", "conductor meets disc(F)");
        if (static_cast<i64>(I.norm()) != c.A.conductor_norm)
            bad("curveA.conductor_norm", "bad primes above it have norm " + std::to_string(I.norm()) +
                                              " (only squarefree conductors are supported)");
        c.A.conductor_ideal = I;
    }

    c.p = as_count(need(j, "", "p"), "p");
    if (!arith::is_prime(c.p)) bad("p", "must be prime");
    if (j.contains("n")) {
        i64 n = as_int(j["n"], "n");
        if (n < 1 || n > 6) bad("n", "must lie in 1..6");
        c.n = static_cast<int>(n);
    }
    if (j.contains("bounds")) {
        const Json& b = j["bounds"];
        only_keys(b, "bounds", {"prime_scan", "hecke_verify", "hecke_verify_F", "neighbor_budget"});
        if (b.contains("prime_scan")) c.bounds.prime_scan = as_count(b["prime_scan"], "bounds.prime_scan");
        if (b.contains("hecke_verify")) c.bounds.hecke_verify = as_count(b["hecke_verify"], "bounds.hecke_verify");
        if (b.contains("hecke_verify_F")) c.bounds.hecke_verify_F = as_count(b["hecke_verify_F"], "bounds.hecke_verify_F");
        if (b.contains("neighbor_budget"))
            c.bounds.neighbor_budget = as_count(b["neighbor_budget"], "bounds.neighbor_budget");
        if (c.bounds.prime_scan > (1u << 24)) bad("bounds.prime_scan", "beyond the point-counting cap");
    }
    if (j.contains("assumptions")) {
        const Json& s = j["assumptions"];
        only_keys(s, "assumptions", {"n_bad", "n_red"});
        if (s.contains("n_bad")) c.n_bad = static_cast<int>(as_count(s["n_bad"], "assumptions.n_bad"));
        if (s.contains("n_red")) c.n_red = static_cast<int>(as_count(s["n_red"], "assumptions.n_red"));
    }
    if (j.contains("exclusions")) {
        const Json& x = j["exclusions"];
        if (!x.is_array()) bad("exclusions", "expected a list of primes");
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::string pth = "exclusions[" + std::to_string(i) + "]";
            u64 q = as_count(x[i], pth);
            if (!arith::is_prime(q)) bad(pth, "not prime");
            c.exclusions.push_back(q);
        }
    }
    return c;
}

InstanceConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_pre("cli", "config", "cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        fail_pre("cli", "config", path + ": " + e.what());
    }
    return parse_config(j);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
        fail_internal("cli", "sha256", "digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace selmer::cli
