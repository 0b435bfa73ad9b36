#pragma once

#include <cstddef>
#include <cstdint>

namespace selmer::kernels {

enum class Isa { scalar, avx2 };

/// Best instruction set supported by this CPU.
Isa detected_isa();
/// Instruction set used by the dispatching entry points.
Isa active_isa();
/// Override dispatch (tests); requesting avx2 on a CPU without it falls back to scalar.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

/// Sum over x in [0, ell) of chi[P(x) mod ell] for P = c[0] + c[1] x + ... + c[deg] x^deg.
/// chi has ell entries; coefficients are reduced residues; ell < 2^26; deg <= 8.
std::int64_t legendre_sum_scalar(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg);
std::int64_t legendre_sum_avx2(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg);
std::int64_t legendre_sum(const std::int32_t* chi, std::uint32_t ell, const std::uint32_t* c, int deg);

/// y = A x mod m for a row-major n x n matrix with entries in [0, m).
/// Requires m < 2^31 and n * m^2 < 2^63.
void matvec_mod_scalar(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m);
void matvec_mod_avx2(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m);
void matvec_mod(const std::uint32_t* A, const std::uint32_t* x, std::uint32_t* y, std::size_t n, std::uint32_t m);

}  // namespace selmer::kernels
