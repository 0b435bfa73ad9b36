// Acceptance checks: one PASS/FAIL line per criterion. Each check uses its own oracle
// (independent factorization, elimination, point counts) rather than the library's verdicts.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "selmer/admissible.hpp"
#include "selmer/brandt.hpp"
#include "selmer/config.hpp"
#include "selmer/error.hpp"
#include "selmer/kolyvagin.hpp"
#include "selmer/orders.hpp"
#include "selmer/pipeline.hpp"
#include "selmer/report.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;
using orders::BigRational;
namespace fs = std::filesystem;

namespace {

const std::string src = SELMER_SOURCE_DIR;
const ec::EllipticCurveQ E11{{0, -1, 1, -10, -20}, 11};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// failures collected by a criterion; empty means pass
struct Log {
    std::vector<std::string> bad;
    std::string info;
    void fail(const std::string& s) {
        if (bad.size() < 8) bad.push_back(s);
        else if (bad.size() == 8) bad.push_back("...");
    }
    void expect(bool ok, const std::string& s) {
        if (!ok) fail(s);
    }
};

int failures = 0;

void criterion(int k, const std::string& title, const std::function<void(Log&)>& body) {
    Log log;
    auto t0 = Clock::now();
    try {
        body(log);
    } catch (const std::exception& e) {
        log.fail(std::string("exception: ") + e.what());
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << since(t0) << "s";
    bool ok = log.bad.empty();
    if (!ok) ++failures;
    std::cout << "criterion " << k << ": " << (ok ? "PASS" : "FAIL") << " - " << title << " [" << os.str() << "]";
    if (!log.info.empty()) std::cout << " " << log.info;
    std::cout << "\n";
    for (auto& b : log.bad) std::cout << "    " << b << "\n";
    std::cout.flush();
}

// trial division, kept apart from arith::factor
std::vector<u64> trial_primes(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

bool trial_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

u64 pw(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<u64>(static_cast<unsigned __int128>(r) * b % m);
        b = static_cast<u64>(static_cast<unsigned __int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

i64 md(i64 a, i64 m) { return ((a % m) + m) % m; }

// nullity of a matrix mod a prime by plain elimination
std::size_t nullity_mod(std::vector<std::vector<u64>> rows, std::size_t cols, u64 p) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        u64 inv = pw(rows[rank][c], p - 2, p);
        for (auto& x : rows[rank]) x = x * inv % p;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] % p == 0) continue;
            u64 f = rows[r][c];
            for (std::size_t j = 0; j < cols; ++j) rows[r][j] = (rows[r][j] + (p - f) * rows[rank][j]) % p;
        }
        ++rank;
    }
    return cols - rank;
}

// a_{l^2}(A) at an inert l by counting points over F_{l^2}
i64 trace_sq_by_count(const quad::RealQuadraticField& F, const ec::EllipticCurveF& A, u64 l) {
    auto K = quad::residue_model(F, l);
    auto red = [&](const quad::OFElement& a) {
        return K.add(K.from_int(a.x), K.scal(static_cast<u64>(md(a.y, static_cast<i64>(l))), K.s()));
    };
    auto a1 = red(A.a[0]), a2 = red(A.a[1]), a3 = red(A.a[2]), a4 = red(A.a[3]), a6 = red(A.a[4]);
    const u64 q = l * l;
    i64 count = 1;
    for (u64 xa = 0; xa < l; ++xa)
        for (u64 xb = 0; xb < l; ++xb) {
            quad::Fp2::El x{xa, xb};
            auto b = K.add(K.mul(a1, x), a3);
            auto x2 = K.mul(x, x);
            auto rhs = K.add(K.add(K.mul(x2, x), K.mul(a2, x2)), K.add(K.mul(a4, x), a6));
            auto disc = K.add(K.mul(b, b), K.scal(4, rhs));
            if (K.is_zero(disc)) count += 1;
            else if (K.pow(disc, (q - 1) / 2) == K.from_int(1)) count += 2;
        }
    return static_cast<i64>(q) + 1 - count;
}

cli::InstanceConfig cfg(const std::string& name) { return cli::load_config(src + "/configs/" + name + ".json"); }

admissible::PairContext context_of(const cli::InstanceConfig& c) {
    return admissible::make_context(c.E, c.A, c.field(), 500, c.exclusions);
}

// ------------------------------------------------------------------ 1

void c1(Log& log) {
    auto t0 = Clock::now();
    int n = 0;
    for (i64 D = 2; D <= 300; ++D) {
        auto ps = trial_primes(static_cast<u64>(D));
        u64 prod = 1;
        for (u64 q : ps) prod *= q;
        if (prod != static_cast<u64>(D) || ps.size() % 2 == 0) continue;
        for (i64 M = 1; D * M <= 300; ++M) {
            if (std::gcd(D, M) != 1) continue;
            auto S = orders::class_set_T(D, M);
            BigRational s = 0;
            for (auto& c : S.classes) s += BigRational(1, c.weight);
            // Eichler mass: prod (v - 1) / 12 * M prod (1 + 1/l)
            BigRational oracle(1, 12);
            for (u64 v : ps) oracle *= BigRational(static_cast<i64>(v) - 1);
            oracle *= BigRational(M);
            for (u64 l : trial_primes(static_cast<u64>(M))) oracle *= BigRational(static_cast<i64>(l) + 1, static_cast<i64>(l));
            log.expect(s == oracle, "mass mismatch at D=" + std::to_string(D) + " M=" + std::to_string(M));
            ++n;
        }
    }
    double t = since(t0);
    log.info = std::to_string(n) + " pairs";
    log.expect(t < 60, "runtime " + std::to_string(t) + "s exceeds 60s");
}

// ------------------------------------------------------------------ 2

void c2(Log& log) {
    auto t0 = Clock::now();
    std::map<u64, i64> tr;
    for (u64 v = 2; v <= 200; ++v)
        if (trial_is_prime(v) && v != 11) tr[v] = static_cast<i64>(v) + 1 - static_cast<i64>(ec::count_points_naive(E11, v));
    auto cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(11, 1));
    brandt::BrandtT B(cs);
    auto f = brandt::eigenform_from_traces(B, tr, 100);
    log.expect(f.cuspidal, "form is not cuspidal");
    int checked = 0;
    for (u64 v = 2; v <= 100; ++v) {
        if (!trial_is_prime(v) || v == 11) continue;
        auto it = f.eigenvalues.find(v);
        log.expect(it != f.eigenvalues.end() && it->second == ec::ap_trace(E11, v), "eigenvalue at " + std::to_string(v));
        // and directly against the Brandt matrix
        const auto& T = B.matrix(brandt::prime_key(v));
        for (std::size_t j = 0; j < T.size(); ++j) {
            i64 s = 0;
            for (std::size_t i = 0; i < T.size(); ++i) s += T[i][j] * f.vector[i];
            log.expect(s == tr[v] * f.vector[j], "T_v^t g != a_v g at v=" + std::to_string(v));
        }
        ++checked;
    }
    log.info = std::to_string(checked) + " primes";
    log.expect(since(t0) < 10, "runtime over 10s");
}

// ------------------------------------------------------------------ 3

void c3(Log& log) {
    auto t0 = Clock::now();
    auto F = quad::make_field(5);
    auto S = orders::class_set_S(F, quad::rational_ideal(F, 1));
    log.expect(S.size() == 1, "class count " + std::to_string(S.size()));
    if (S.size() == 1) {
        log.expect(S.classes[0].unit_count == 120, "unit count " + std::to_string(S.classes[0].unit_count));
        // O^x / O_F^x is A5, so the single weight is 60 = |O^1| / 2
        log.expect(BigRational(2, S.classes[0].unit_count) == S.mass, "mass differs from 1/|O^1/+-1|");
        log.expect(S.mass == BigRational(1, 60), "mass is not 1/60");
    }
    log.expect(since(t0) < 30, "runtime over 30s");
}

// ------------------------------------------------------------------ 4

void c4(Log& log) {
    auto t0 = Clock::now();
    auto c = cfg("desk_odd");
    auto ctx = context_of(c);
    auto adm = admissible::scan_n_admissible(ctx, 17, 1, 2000);
    if (adm.empty()) return log.fail("no admissible prime below 2000");
    u64 ell = adm.front().ell;
    int sign = adm.front().epsilon_sigma;
    const u64 p = 17;
    auto cs = std::make_shared<const orders::ClassSetT>(orders::class_set_T(static_cast<i64>(ell), 11));
    auto m = brandt::level_raise(E11, 11, 1, ell, p, 1, sign, 60, cs);
    log.expect(m.op_sign == sign, "op sign");
    // independent elimination: op eigenspace cut by T_v - a_v for good v <= 60
    brandt::BrandtT B(cs);
    const std::size_t h = cs->size();
    auto op = orders::op_ell_T(*cs, ell);
    std::vector<std::vector<u64>> rows;
    for (std::size_t i = 0; i < h; ++i) {
        std::vector<u64> r(h, 0);
        r[static_cast<std::size_t>(op[i])] = (r[static_cast<std::size_t>(op[i])] + 1) % p;
        r[i] = (r[i] + static_cast<u64>(md(-sign, p))) % p;
        rows.push_back(r);
    }
    for (u64 v = 2; v <= 60; ++v) {
        if (!trial_is_prime(v) || v == 11 || v == ell) continue;
        const auto& T = B.matrix(brandt::prime_key(v));
        i64 a = ec::ap_trace(E11, v);
        for (std::size_t j = 0; j < h; ++j) {
            std::vector<u64> r(h);
            for (std::size_t i = 0; i < h; ++i) r[i] = static_cast<u64>(md(T[i][j] - (i == j ? a : 0), p));
            rows.push_back(r);
        }
    }
    std::size_t k = nullity_mod(rows, h, p);
    log.expect(k == 1, "eigenspace dimension " + std::to_string(k));
    for (auto& r : rows) {
        u64 s = 0;
        for (std::size_t i = 0; i < h; ++i) s = (s + r[i] * (m.vector[i] % p)) % p;
        if (s) {
            log.fail("returned vector is not in the eigenspace");
            break;
        }
    }
    bool nonzero = false;
    for (u64 x : m.vector) nonzero |= x % p != 0;
    log.expect(nonzero, "vector vanishes mod p");
    log.info = "l=" + std::to_string(ell) + " sign=" + std::to_string(sign) + " classes=" + std::to_string(h);
    log.expect(since(t0) < 300, "runtime over 5 min");
}

// ------------------------------------------------------------------ 5

void c5_one(Log& log, const std::string& name, std::string& info) {
    auto c = cfg(name);
    auto ctx = context_of(c);
    const u64 p = c.p;
    const int n = c.n;
    const u64 pn = static_cast<u64>(arith::ipow(static_cast<i64>(p), n));
    const u64 bound = 10000;
    const i64 disc = ctx.F.disc;

    // auxiliary prime: least prime off p N M disc with p not dividing q + 1 - a_q
    u64 q = 2;
    for (;; ++q) {
        if (!trial_is_prime(q)) continue;
        if (static_cast<i64>(p) % static_cast<i64>(q) == 0 || c.E.conductor % static_cast<i64>(q) == 0 ||
            ctx.level_norm % static_cast<i64>(q) == 0 || disc % static_cast<i64>(q) == 0)
            continue;
        if (md(static_cast<i64>(q) + 1 - ec::ap_trace(c.E, q), static_cast<i64>(p)) != 0) break;
    }
    log.expect(admissible::auxiliary_prime(ctx, p) == q, name + ": auxiliary prime");
    std::set<u64> excl{2, p, q};
    for (i64 m : {c.E.conductor, ctx.level_norm, disc})
        for (u64 r : trial_primes(static_cast<u64>(m < 0 ? -m : m))) excl.insert(r);
    for (u64 r : c.exclusions) excl.insert(r);

    // the admissible set from first principles
    std::map<u64, int> expected;
    for (u64 l = 3; l <= bound; l += 2) {
        if (!trial_is_prime(l) || excl.count(l)) continue;
        if (arith::kronecker(disc, static_cast<i64>(l)) != -1) continue;              // A5
        if ((l % p) * (l % p) % p == 1) continue;                                     // A2
        if (pw(l, p - 1, pn) != 1) continue;                                          // A4
        i64 a = ec::ap_trace(c.E, l);
        bool plus = md(static_cast<i64>(l) + 1 - a, static_cast<i64>(pn)) == 0;
        bool minus = md(static_cast<i64>(l) + 1 + a, static_cast<i64>(pn)) == 0;
        if (plus && minus) log.fail(name + ": both signs satisfy A3 at " + std::to_string(l));
        if (plus || minus) expected[l] = plus ? 1 : -1;
    }
    auto adm = admissible::scan_n_admissible(ctx, p, n, bound);
    std::map<u64, int> got;
    for (auto& cert : adm) {
        got[cert.ell] = cert.epsilon_sigma;
        log.expect((cert.bitmap() & 31u) == 31u, name + ": clause bitmap at " + std::to_string(cert.ell));
        // the other sign must fail A3 (unique epsilon)
        i64 a = ec::ap_trace(c.E, cert.ell);
        log.expect(md(static_cast<i64>(cert.ell) + 1 + cert.epsilon_sigma * a, static_cast<i64>(p)) != 0,
                   name + ": epsilon not unique at " + std::to_string(cert.ell));
    }
    log.expect(got == expected, name + ": n-admissible set differs from the checker (" + std::to_string(got.size()) +
                                    " vs " + std::to_string(expected.size()) + ")");

    // strong primes: S2 sign and S3 avoidance, traces recounted for small l
    std::map<u64, int> strong_got;
    std::size_t recounted = 0;
    for (int eps : {1, -1}) {
        auto st = admissible::scan_strongly_admissible(ctx, p, n, eps, bound);
        std::set<u64> want;
        for (auto [l, es] : expected) {
            int eta = 1;
            if (ctx.pc.kind == ec::PairKind::B && ctx.pc.asai_character_disc && *ctx.pc.asai_character_disc != 1)
                eta = arith::kronecker(*ctx.pc.asai_character_disc, static_cast<i64>(l));
            if (eps != -es * eta) continue;
            i64 t = ec::trace_frob_sq(ctx.F, c.A, l);
            const i64 P = static_cast<i64>(p), L = static_cast<i64>(l);
            i64 tm = md(t, P);
            bool s3 = tm != md(2 * L, P) && tm != md(-2 * L, P) && tm != md(L * L + 1, P) && tm != md(-L * L - 1, P);
            if (p % 4 == 1) s3 = s3 && tm != 0;
            if (p % 3 == 1) s3 = s3 && tm != md(-L, P) && tm != md(L, P);
            if (s3) want.insert(l);
        }
        std::set<u64> have;
        for (auto& cert : st) {
            have.insert(cert.ell);
            if (strong_got.count(cert.ell)) log.fail(name + ": " + std::to_string(cert.ell) + " in both sign lists");
            strong_got[cert.ell] = eps;
            if (!cert.strong) {
                log.fail(name + ": strong data missing");
                continue;
            }
            const i64 L = static_cast<i64>(cert.ell), P = static_cast<i64>(p);
            i64 t = cert.strong->trace_Asq;
            log.expect(std::abs(t) <= 2 * L, name + ": Hasse bound at " + std::to_string(L));
            log.expect(md(t - 2 * L, P) != 0 && md(t + 2 * L, P) != 0, name + ": a_{l^2} +- 2l vanishes at " + std::to_string(L));
        }
        log.expect(have == want, name + ": strong set for eps " + std::to_string(eps) + " differs (" +
                                     std::to_string(have.size()) + " vs " + std::to_string(want.size()) + ")");
    }
    // the trace feeding S3, recounted over F_{l^2} at every inert good l < 400
    for (u64 l = 3; l < 400; l += 2) {
        if (!trial_is_prime(l) || excl.count(l) || arith::kronecker(disc, static_cast<i64>(l)) != -1) continue;
        log.expect(trace_sq_by_count(ctx.F, c.A, l) == ec::trace_frob_sq(ctx.F, c.A, l), name + ": point count at " + std::to_string(l));
        ++recounted;
    }
    info += name + ": " + std::to_string(got.size()) + " admissible, " + std::to_string(strong_got.size()) + " strong, " +
            std::to_string(recounted) + " recounted; ";
}

void c5(Log& log) {
    std::string info;
    c5_one(log, "desk_even", info);
    c5_one(log, "even_p11", info);
    log.info = info;
}

// ------------------------------------------------------------------ 6

struct TowerSets {
    std::shared_ptr<const orders::TowerQ> T;
    std::map<orders::Level, std::shared_ptr<orders::ClassSetT>> sets;
    orders::ClassSetT& at(const orders::Level& lv) {
        auto& s = sets[lv];
        if (!s) s = std::make_shared<orders::ClassSetT>(orders::enumerate_classes<4>(T, lv));
        return *s;
    }
};

template <int N>
void level_identities(Log& log, const std::string& tag, orders::ClassSet<N>& top, orders::ClassSet<N>& low,
                      std::size_t i, u64 norm_l, int e) {
    const std::size_t k = top.level.size();
    orders::Level d(k, 0), z(k, 0);
    d[i] = 1;
    auto d0 = orders::degeneracy<N>(top, low, d, z);
    auto d1 = orders::degeneracy<N>(top, low, d, d);
    auto op = orders::op_level<N>(top, i);
    std::vector<BigRational> cnt(low.size(), 0);
    for (std::size_t t = 0; t < top.size(); ++t) {
        auto o = static_cast<std::size_t>(op[t]);
        if (static_cast<std::size_t>(op[o]) != t) {
            log.fail(tag + ": op not an involution");
            break;
        }
        auto s = static_cast<std::size_t>(d0[t]);
        cnt[s] += BigRational(low.classes[s].weight, top.classes[t].weight);
        if (e == 1 && d1[t] != d0[o]) log.fail(tag + ": delta(l,l) != delta(l,1) op");
    }
    BigRational want(static_cast<i64>(e == 1 ? norm_l + 1 : norm_l));
    for (auto& c : cnt)
        if (c != want) {
            log.fail(tag + ": degeneracy fiber count");
            break;
        }
}

void c6(Log& log) {
    int levels = 0, squares = 0;
    for (i64 D = 2; D <= 200; ++D) {
        auto ps = trial_primes(static_cast<u64>(D));
        u64 prod = 1;
        for (u64 q : ps) prod *= q;
        if (prod != static_cast<u64>(D) || ps.size() % 2 == 0) continue;
        for (i64 M = 1; D * M <= 200; ++M) {
            if (std::gcd(D, M) != 1) continue;
            std::string tag = "(" + std::to_string(D) + "," + std::to_string(M) + ")";
            std::string stage = tag;
            try {
            TowerSets ts{orders::build_tower(D, M), {}};
            auto& T = *ts.T;
            auto& top = ts.at(T.top);
            for (u64 v : ps) {
                auto op = orders::op_ramified(top, v);
                for (std::size_t t = 0; t < op.size(); ++t)
                    if (static_cast<std::size_t>(op[static_cast<std::size_t>(op[t])]) != t) {
                        log.fail(tag + ": op at ramified " + std::to_string(v));
                        break;
                    }
            }
            for (std::size_t i = 0; i < T.primes.size(); ++i) {
                orders::Level lv = T.top;
                --lv[i];
                level_identities<4>(log, tag, top, ts.at(lv), i, T.primes[i].p, T.top[i]);
                ++levels;
            }
            // the special map square over both fields
            for (i64 fd : {2, 5}) {
                auto F = quad::make_field(fd);
                bool ok = arith::gcd(static_cast<u64>(M), static_cast<u64>(F.disc)) == 1;
                for (u64 v : ps) ok = ok && arith::kronecker(F.disc, static_cast<i64>(v)) == -1;
                if (!ok) continue;
                auto TF = orders::build_tower_F(T, F);
                std::map<orders::Level, std::shared_ptr<orders::ClassSetS>> S;
                auto atS = [&](const orders::Level& lv) -> orders::ClassSetS& {
                    auto& s = S[lv];
                    if (!s) s = std::make_shared<orders::ClassSetS>(orders::enumerate_classes<8>(TF, lv));
                    return *s;
                };
                std::string ftag = tag + " over Q(sqrt " + std::to_string(fd) + ")";
                stage = ftag;
                auto lvF = orders::level_to_F(T, *TF, T.top);
                auto& Stop = atS(lvF);
                auto zt = orders::special_map(top, Stop);
                for (std::size_t i = 0; i < T.primes.size(); ++i) {
                    orders::Level lv = T.top, d(T.primes.size(), 0), z(T.primes.size(), 0);
                    --lv[i];
                    d[i] = 1;
                    auto& low = ts.at(lv);
                    auto lvlF = orders::level_to_F(T, *TF, lv);
                    auto dF = orders::level_to_F(T, *TF, d), zF = orders::level_to_F(T, *TF, z);
                    auto& Slow = atS(lvlF);
                    auto zb = orders::special_map(low, Slow);
                    for (int dd = 0; dd <= 1; ++dd) {
                        auto del = orders::degeneracy<4>(top, low, d, dd ? d : z);
                        auto gam = orders::degeneracy<8>(Stop, Slow, dF, dd ? dF : zF);
                        for (std::size_t t = 0; t < zt.size(); ++t)
                            if (zb[static_cast<std::size_t>(del[t])] != gam[static_cast<std::size_t>(zt[t])]) {
                                log.fail(ftag + ": zeta square fails");
                                break;
                            }
                        ++squares;
                    }
                    // identities on the F side at each prime above l
                    for (std::size_t j = 0; j < TF->primes.size(); ++j) {
                        if (dF[j] == 0) continue;
                        orders::Level lj = lvF;
                        --lj[j];
                        level_identities<8>(log, ftag, Stop, atS(lj), j, TF->primes[j].norm, lvF[j]);
                        ++levels;
                    }
                }
            }
            } catch (const std::exception& e) {
                log.fail(stage + ": " + e.what());
            }
        }
    }
    log.info = std::to_string(levels) + " level steps, " + std::to_string(squares) + " squares";
}

// ------------------------------------------------------------------ 7

void c7(Log& log) {
    std::vector<u64> ff = {1, 4, 10, 22, 46, 94};
    for (int r = 1; r <= 6; ++r) log.expect(kolyvagin::ff(r) == ff[static_cast<std::size_t>(r - 1)], "ff(" + std::to_string(r) + ")");
    // recursion forced: ff(r+1) = 2 (ff(r) + 1)
    for (int r = 1; r < 6; ++r) log.expect(kolyvagin::ff(r + 1) == 2 * (kolyvagin::ff(r) + 1), "ff recursion");
    log.expect(kolyvagin::fp_bad(11) == std::set<u64>{1, 10}, "fp_bad(11)");
    log.expect(kolyvagin::fp_bad(17) == std::set<u64>{1, 4, 13, 16}, "fp_bad(17)");
    for (u64 p : {11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 31ULL, 37ULL}) {
        std::set<u64> want;
        for (u64 x = 1; x < p; ++x) {
            u64 o = 1, y = x;
            while (y != 1) y = y * x % p, ++o;
            if (o == 1 || o == 2 || o == 3 || o == 4 || o == 6) want.insert(x);
        }
        log.expect(kolyvagin::fp_bad(p) == want, "fp_bad(" + std::to_string(p) + ")");
    }
    for (u64 p : {3ULL, 5ULL, 11ULL, 17ULL, 19ULL}) {
        // monotone: denser sets never need a larger exponent
        int prev = 1 << 30;
        for (i64 den = 5000; den >= 1; --den) {
            int v = kolyvagin::n_den(BigRational(1, den), p);
            if (v > prev) {
                log.fail("n_den not monotone at p=" + std::to_string(p));
                break;
            }
            prev = v;
        }
        i64 pk = 1;
        for (int k = 0; k <= 6; ++k, pk *= static_cast<i64>(p)) {
            log.expect(kolyvagin::n_den(BigRational(1, pk), p) == k, "n_den(1/p^k)");
            log.expect(kolyvagin::n_den(BigRational(1, pk + 1), p) == k, "n_den(1/(p^k+1))");
            if (k >= 1 && pk > 1) log.expect(kolyvagin::n_den(BigRational(1, pk - 1), p) == (pk - 1 == 1 ? 0 : k - 1),
                                             "n_den(1/(p^k-1))");
        }
    }
}

// ------------------------------------------------------------------ 8

void c8(Log& log) {
    std::vector<i64> grid = {1, 11, 11 * 13, 3 * 5 * 7, 2 * 3 * 5 * 7, 17, 19 * 23, 2 * 29 * 31, 3 * 7 * 11 * 13 * 17, 43 * 47};
    for (i64 nm : grid) {
        auto ps = trial_primes(static_cast<u64>(nm));
        auto par = ec::parity_from_minus(nm);
        int want = ps.size() % 2 ? 1 : -1;  // (-1)^(#primes + 1)
        log.expect(par.epsilon == want, "epsilon at N- = " + std::to_string(nm));
        log.expect((par.type == ec::ParityType::even) == (want == 1), "type at N- = " + std::to_string(nm));
        std::vector<u64> sig{0};
        sig.insert(sig.end(), ps.begin(), ps.end());
        log.expect(ec::sigma_set_from_minus(nm) == sig, "sigma set at N- = " + std::to_string(nm));
    }
    // the desk pairs, with N- taken as the primes of N inert in F
    for (auto name : {"desk_even", "even_p11", "desk_odd"}) {
        auto c = cfg(name);
        auto F = c.field();
        i64 nm = 1;
        for (u64 l : trial_primes(static_cast<u64>(c.E.conductor)))
            if (arith::kronecker(F.disc, static_cast<i64>(l)) == -1) nm *= static_cast<i64>(l);
        int want = trial_primes(static_cast<u64>(nm)).size() % 2 ? 1 : -1;
        log.expect(ec::parity(c.E, c.A, F).epsilon == want, std::string("parity of ") + name);
    }
}

// ------------------------------------------------------------------ 9

void c9(Log& log) {
    auto c = cfg("even_p11");
    const u64 p = c.p;
    if (p != 11) return log.fail("config does not have p = 11");
    auto ctx = context_of(c);
    // a strongly 1-admissible prime and the period of the instance
    std::optional<admissible::AdmissiblePrimeCertificate> cert;
    for (int eps : {-1, 1}) {
        auto st = admissible::scan_strongly_admissible(ctx, p, 1, eps, c.bounds.prime_scan);
        if (!st.empty() && (!cert || st.front().ell < cert->ell)) cert = st.front();
    }
    if (!cert) return log.fail("no strongly admissible prime");
    cli::RunFlags fl;
    auto doc = cli::run_command("period", &c, fl);
    const auto& per = doc.sections.at("period");
    if (per.at("chosen").is_null()) return log.fail("no nonzero period");
    kolyvagin::BigInt period(per.at("entries").at(per.at("chosen").get<std::size_t>()).at("value").get<std::string>());
    auto ord = [&](kolyvagin::BigInt x) {
        int o = 0;
        while (x != 0 && x % static_cast<int>(p) == 0) x /= static_cast<int>(p), ++o;
        return o;
    };
    const u64 ell = cert->ell;
    const int es = cert->epsilon_sigma;
    const i64 t = cert->strong->trace_Asq;
    log.expect(md(t - 2 * es * static_cast<i64>(ell), static_cast<i64>(p)) != 0, "unit factor vanishes");
    int zeros = 0;
    for (int n = 1; n <= 2; ++n) {
        for (const kolyvagin::BigInt& P : std::vector<kolyvagin::BigInt>{period, kolyvagin::BigInt(period * static_cast<int>(p))}) {
            int op = ord(P);
            for (i64 nb = 0; nb < static_cast<i64>(p); ++nb)
                for (i64 nc = 0; nc < static_cast<i64>(p); ++nc) {
                    u64 v = kolyvagin::congruence_rhs_bis(ell, nb, nc, t, es, P, p, n);
                    i64 lin = nc + es * nb;
                    bool on_plane = md(lin, static_cast<i64>(p)) == 0;
                    int o = lin == 0 ? 1 << 20 : op + ord(kolyvagin::BigInt(lin));
                    if (o >= n) {
                        if (v != 0) log.fail("nonzero where ord >= n at (" + std::to_string(nb) + "," + std::to_string(nc) + ")");
                        if (on_plane && n == 1 && P == period) ++zeros;
                    } else {
                        int got = ord(kolyvagin::BigInt(v));
                        if (v == 0 || got != o) log.fail("ord mismatch at (" + std::to_string(nb) + "," + std::to_string(nc) + ")");
                    }
                    if (n == 1 && P == period && op == 0) log.expect((v == 0) == on_plane, "zero set is not the hyperplane");
                }
        }
    }
    std::ostringstream os;
    os << "l=" << ell << " eps=" << es << " period=" << period << " hyperplane zeros=" << zeros;
    log.info = os.str();
}

// ------------------------------------------------------------------ 10

void c10(Log& log) {
    auto c = cfg("desk_even");
    fs::path base = fs::temp_directory_path() / ("selmer_accept_" + std::to_string(::getpid()));
    fs::remove_all(base);
    auto run = [&](const std::string& dir, bool timing) {
        cli::RunFlags fl;
        fl.cache_dir = dir;
        fl.timing = timing;
        return cli::run_command("predict", &c, fl);
    };
    auto a = cli::emit_report(run((base / "a").string(), false), cli::Format::structured);
    auto b = cli::emit_report(run((base / "b").string(), false), cli::Format::structured);
    log.expect(a == b, "cold runs differ");
    auto w = run((base / "a").string(), true);
    log.expect(w.timing.is_object(), "timing requested but absent");
    w.timing = cli::Json();
    log.expect(cli::emit_report(w, cli::Format::structured) == a, "warm run differs modulo timing");
    fs::remove_all(base);
}

}  // namespace

int main(int argc, char** argv) {
    // optional list of criterion numbers to run
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto criterion = [&](int k, const std::string& title, const std::function<void(Log&)>& body) {
        if (only.empty() || only.count(k)) ::criterion(k, title, body);
    };
    criterion(1, "mass-certified enumeration for D*M <= 300", c1);
    criterion(2, "Brandt eigenvalues on D = 11 match point counts to 100", c2);
    criterion(3, "maximal order over Q(sqrt 5) has 120 norm-one units", c3);
    criterion(4, "level raising mod 17 at the first admissible prime", c4);
    criterion(5, "admissible certificates pass an independent checker to 10^4", c5);
    criterion(6, "involutions, degeneracy identities and the zeta square for D*M <= 200", c6);
    criterion(7, "ff, fp_bad and n_den", c7);
    criterion(8, "parity over a grid of N- values", c8);
    criterion(9, "congruence right-hand side sweep mod 11", c9);
    criterion(10, "predict is deterministic cold and warm", c10);
    std::cout << (failures ? "acceptance: FAIL (" + std::to_string(failures) + ")" : std::string("acceptance: PASS")) << "\n";
    return failures ? 1 : 0;
}
