#pragma once

#include <vector>

#include "selmer/lattice.hpp"
#include "selmer/quadfield.hpp"

namespace selmer::orders {

using arith::i64;
using arith::u64;

/// Hilbert symbol (a, b)_p; p = 0 denotes the real place.
int hilbert_symbol(i64 a, i64 b, u64 p);
/// Finite primes where (a, b) ramifies.
std::vector<u64> ramified_primes(i64 a, i64 b);

/// Structure constants of (a, b) on the basis 1, i, j, k.
lat::Algebra<4> quaternion_structure(i64 a, i64 b);

/// Definite quaternion algebra over Q ramified exactly at D and infinity.
struct QuaternionAlgebraQ {
    i64 a = -1, b = -1, D = 2;
    lat::Algebra<4> alg;
};

QuaternionAlgebraQ make_definite_algebra(i64 D);

/// B tensor F on the Z-basis e_c (x) omega^s, index 2c + s.
struct QuaternionAlgebraF {
    quad::RealQuadraticField F;
    QuaternionAlgebraQ base;
    lat::Algebra<8> alg;
};

QuaternionAlgebraF tensor_with_field(const QuaternionAlgebraQ& B, const quad::RealQuadraticField& F);

lat::Vec<8> embed(const lat::Vec<4>& x);
/// The O_F element x + y omega inside B (x) F.
lat::Vec<8> central_of(const quad::OFElement& a);
/// O (x) O_F for a lattice O of B.
lat::Lattice<8> tensor_lattice(const lat::Lattice<4>& O);

}  // namespace selmer::orders
