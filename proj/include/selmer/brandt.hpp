#pragma once

#include <map>
#include <memory>
#include <vector>

#include "selmer/elliptic.hpp"
#include "selmer/orders.hpp"

namespace selmer::brandt {

using arith::i64;
using arith::u64;
using orders::Central;
using Matrix = std::vector<std::vector<i64>>;

/// Hecke matrices on a class set. Entry (i, j) is the number of index-v sublattices of the
/// j-th representative isomorphic to the i-th; columns sum to Norm(v) + 1.
template <int N>
class BrandtModule {
public:
    explicit BrandtModule(std::shared_ptr<const orders::ClassSet<N>> base);

    const orders::ClassSet<N>& base() const { return *base_; }
    std::size_t size() const { return base_->size(); }
    const std::vector<i64>& weights() const { return w_; }

    /// Matrix at a prime given by a totally positive generator (over Q: the prime itself).
    const Matrix& matrix(Central gen);
    /// Computes all missing matrices in one theta pass per pair of classes.
    void prepare(const std::vector<Central>& gens);

    const std::map<Central, Matrix>& cache() const { return cache_; }
    /// True when gen divides the level (or D over Q).
    bool divides_level(Central gen) const;

private:
    std::shared_ptr<const orders::ClassSet<N>> base_;
    std::vector<i64> w_;
    std::map<Central, Matrix> cache_;
    void insert(Central gen, Matrix m);
};

using BrandtT = BrandtModule<4>;
using BrandtS = BrandtModule<8>;

/// Normalized generator of a rational prime (Q) or a prime of O_F.
Central prime_key(u64 v);
Central prime_key(const quad::RealQuadraticField& F, const quad::PrimeIdeal& P);

/// Integer eigenform. vector is the function g on classes with T^t g = a_v g, primitive,
/// first nonzero entry positive; weighted = primitive (g_i / w_i), an eigenvector of T itself.
struct Eigenform {
    std::vector<i64> vector;
    std::vector<i64> weighted;
    std::map<u64, i64> eigenvalues;  // over Q, keyed by prime
    std::vector<std::pair<std::string, i64>> table;  // prime label and eigenvalue, as verified
    bool cuspidal = false;
};

/// Sturm-style verification bound with a floor of 20 primes.
u64 default_verify_bound(i64 D, i64 M);

Eigenform eigenform_from_traces(BrandtT& mod, const std::map<u64, i64>& traces, u64 verify_bound);
/// Over F: eigenvalues a_P(A) at good P of norm <= bound.
Eigenform eigenform_pi(BrandtS& mod, const quad::RealQuadraticField& F, const ec::EllipticCurveF& A,
                       u64 verify_norm_bound);

struct ModPnEigenform {
    u64 p = 0;
    int n = 1;
    u64 modulus = 1;
    std::vector<u64> vector;
    int op_sign = 1;
    std::vector<u64> verified;  // primes v with T^t g = a_v g mod p^n checked
};

/// Level raising: on T(level, N^- * ell) intersect ker(T_v - a_v(E)) mod p^n for good v <= bound
/// with the op_ell eigenspace of the given sign; the result must be free of rank one.
ModPnEigenform level_raise(const ec::EllipticCurveQ& E, i64 level, i64 n_minus, u64 ell, u64 p, int n,
                           int sign, u64 bound, std::shared_ptr<const orders::ClassSetT> cs = nullptr);

/// Checks T^t g = a g mod p^n (matvec kernel); used for verification and tests.
bool satisfies_mod(const Matrix& T, const std::vector<u64>& g, i64 a, u64 modulus);

}  // namespace selmer::brandt
