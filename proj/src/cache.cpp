#include "selmer/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "selmer/config.hpp"
#include "selmer/error.hpp"

namespace selmer::cli {

namespace fs = std::filesystem;

Cache::Cache(std::string dir, int version) : dir_(std::move(dir)), version_(version) {
    if (!enabled()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail_pre("cli", "cache", "cannot create cache directory " + dir_);
}

std::string Cache::key_of(const Json& inputs) { return sha256_hex(inputs.dump()).substr(0, 32); }

std::string Cache::path_of(const std::string& kind, const std::string& key) const {
    return (fs::path(dir_) / (kind + "-" + key + ".rec")).string();
}

void Cache::touch(const std::string& kind, const std::string& key) { used_[kind + "/" + key] = kind; }

void Cache::warn(const std::string& w) {
    warnings_.push_back(w);
    std::cerr << "warning: " << w << "\n";
}

std::optional<Json> Cache::load(const std::string& kind, const std::string& key) {
    if (!enabled()) return std::nullopt;
    std::string path = path_of(kind, key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string header, sum;
    std::getline(in, header);
    std::getline(in, sum);
    std::stringstream rest;
    rest << in.rdbuf();
    std::string payload = rest.str();
    std::string want = "selmer-cache " + std::to_string(version_) + " " + kind;
    if (header != want) {
        warn("cache record " + path + " has header '" + header + "', recomputing");
        return std::nullopt;
    }
    if (sum != "sha256 " + sha256_hex(payload)) {
        warn("cache record " + path + " fails its checksum, recomputing");
        return std::nullopt;
    }
    try {
        return Json::parse(payload);
    } catch (const Json::exception&) {
        warn("cache record " + path + " does not parse, recomputing");
        return std::nullopt;
    }
}

void Cache::store(const std::string& kind, const std::string& key, const Json& payload) {
    if (!enabled()) return;
    std::string body = payload.dump();
    std::string path = path_of(kind, key);
    std::string tmp = path + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            warn("cannot write " + tmp);
            return;
        }
        out << "selmer-cache " << version_ << " " << kind << "\n"
            << "sha256 " << sha256_hex(body) << "\n"
            << body;
        if (!out.flush()) {
            warn("short write on " + tmp);
            return;
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        warn("cannot rename into " + path);
    }
}

// ---------------------------------------------------------------- records

namespace {

template <int N>
Json enc(const lat::Lattice<N>& L) {
    Json rows = Json::array();
    for (auto& r : L.b) rows.push_back(r);
    return {{"den", L.den}, {"b", rows}};
}

template <int N>
lat::Lattice<N> dec(const Json& j) {
    lat::Lattice<N> L;
    L.den = j.at("den").get<i64>();
    const Json& rows = j.at("b");
    if (rows.size() != N) fail_internal("cli", "cache", "lattice rank");
    for (int i = 0; i < N; ++i) L.b[i] = rows[i].get<lat::Vec<N>>();
    return L;
}

}  // namespace

template <int N>
Json encode_classes(const orders::ClassSet<N>& S) {
    Json cl = Json::array();
    for (auto& c : S.classes) {
        Json o = Json::array();
        for (auto& x : c.orient) o.push_back({{"v", x.v}, {"z", x.z}, {"zden", x.zden}, {"image", {x.image.a, x.image.b}}});
        cl.push_back({{"ideal", enc<N>(c.ideal)},
                      {"norm", c.norm},
                      {"left", enc<N>(c.left)},
                      {"over", enc<N>(c.over)},
                      {"units", c.unit_count},
                      {"weight", c.weight},
                      {"invariant", c.invariant},
                      {"orient", o}});
    }
    std::ostringstream m;
    m << S.mass;
    return {{"level", S.level}, {"mass", m.str()}, {"classes", cl}};
}

template <int N>
orders::ClassSet<N> decode_classes(std::shared_ptr<const orders::Tower<N>> T, const orders::Level& lv, const Json& j) {
    if (j.at("level").get<orders::Level>() != lv) fail_internal("cli", "cache", "stored level differs");
    std::vector<orders::ClassRecord<N>> recs;
    for (auto& x : j.at("classes")) {
        orders::ClassRecord<N> c;
        c.ideal = dec<N>(x.at("ideal"));
        c.norm = x.at("norm").get<orders::Central>();
        c.left = dec<N>(x.at("left"));
        c.over = dec<N>(x.at("over"));
        c.unit_count = x.at("units").get<i64>();
        c.weight = x.at("weight").get<i64>();
        c.invariant = x.at("invariant").get<std::vector<i64>>();
        for (auto& o : x.at("orient")) {
            orders::Orientation r;
            r.v = o.at("v").get<u64>();
            r.z = o.at("z").get<lat::Vec<4>>();
            r.zden = o.at("zden").get<i64>();
            r.image = {o.at("image")[0].get<u64>(), o.at("image")[1].get<u64>()};
            c.orient.push_back(r);
        }
        recs.push_back(std::move(c));
    }
    auto S = orders::restore_classes<N>(T, lv, std::move(recs));
    std::ostringstream m;
    m << S.mass;
    if (m.str() != j.at("mass").get<std::string>()) fail_internal("cli", "cache", "stored mass differs from the oracle");
    return S;
}

Json encode_eigenform(const brandt::Eigenform& f) {
    Json ev = Json::array();
    for (auto [v, a] : f.eigenvalues) ev.push_back({v, a});
    Json tb = Json::array();
    for (auto& [l, a] : f.table) tb.push_back({l, a});
    return {{"vector", f.vector}, {"weighted", f.weighted}, {"eigenvalues", ev}, {"table", tb}, {"cuspidal", f.cuspidal}};
}

brandt::Eigenform decode_eigenform(const Json& j) {
    brandt::Eigenform f;
    f.vector = j.at("vector").get<std::vector<i64>>();
    f.weighted = j.at("weighted").get<std::vector<i64>>();
    for (auto& e : j.at("eigenvalues")) f.eigenvalues[e[0].get<u64>()] = e[1].get<i64>();
    for (auto& e : j.at("table")) f.table.emplace_back(e[0].get<std::string>(), e[1].get<i64>());
    f.cuspidal = j.at("cuspidal").get<bool>();
    if (f.vector.size() != f.weighted.size() || f.vector.empty()) fail_internal("cli", "cache", "eigenform shape");
    return f;
}

template <int N>
std::shared_ptr<const orders::ClassSet<N>> cached_classes(Cache& c, std::shared_ptr<const orders::Tower<N>> T,
                                                          const orders::Level& lv, const Json& key_inputs,
                                                          std::size_t budget) {
    Json k = key_inputs;
    k["level"] = lv;
    const std::string kind = N == 4 ? "classes_T" : "classes_S";
    std::string key = Cache::key_of(k);
    c.touch(kind, key);
    if (auto j = c.load(kind, key)) {
        try {
            return std::make_shared<const orders::ClassSet<N>>(decode_classes<N>(T, lv, *j));
        } catch (const std::exception& e) {
            c.warn("cache record " + c.path_of(kind, key) + " rejected (" + e.what() + "), recomputing");
        }
    }
    auto S = std::make_shared<const orders::ClassSet<N>>(orders::enumerate_classes<N>(T, lv, budget));
    c.store(kind, key, encode_classes<N>(*S));
    return S;
}

template Json encode_classes<4>(const orders::ClassSet<4>&);
template Json encode_classes<8>(const orders::ClassSet<8>&);
template orders::ClassSet<4> decode_classes<4>(std::shared_ptr<const orders::Tower<4>>, const orders::Level&, const Json&);
template orders::ClassSet<8> decode_classes<8>(std::shared_ptr<const orders::Tower<8>>, const orders::Level&, const Json&);
template std::shared_ptr<const orders::ClassSet<4>> cached_classes<4>(Cache&, std::shared_ptr<const orders::Tower<4>>,
                                                                      const orders::Level&, const Json&, std::size_t);
template std::shared_ptr<const orders::ClassSet<8>> cached_classes<8>(Cache&, std::shared_ptr<const orders::Tower<8>>,
                                                                      const orders::Level&, const Json&, std::size_t);

}  // namespace selmer::cli
