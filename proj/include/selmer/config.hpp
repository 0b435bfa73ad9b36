#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "selmer/elliptic.hpp"

namespace selmer::cli {

using arith::i64;
using arith::u64;
using Json = nlohmann::json;

struct Bounds {
    u64 prime_scan = 2000;
    u64 hecke_verify = 0;     // 0 selects the default Sturm-style bound
    u64 hecke_verify_F = 50;  // norm bound for eigenforms over F
    std::size_t neighbor_budget = 50000;
};

struct InstanceConfig {
    std::string name;
    i64 field_d = 5;
    ec::EllipticCurveQ E;
    ec::EllipticCurveF A;
    u64 p = 0;
    int n = 1;
    Bounds bounds;
    int n_bad = 0, n_red = 0;
    std::vector<u64> exclusions;

    quad::RealQuadraticField field() const;
    /// Conductor of A as an ideal (product of the bad primes above Nm; squarefree).
    quad::Ideal conductor_A() const;
    /// Canonical serialization (sorted keys); its SHA-256 is the config hash.
    Json to_json() const;
};

/// Parses and validates; unknown keys and violated preconditions raise precondition errors
/// naming the field path.
InstanceConfig parse_config(const Json& j);
InstanceConfig load_config(const std::string& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace selmer::cli
