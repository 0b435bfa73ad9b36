#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selmer/brandt.hpp"
#include "selmer/orders.hpp"

namespace selmer::cli {

using Json = nlohmann::json;

/// On-disk record store. Each record is a file
///   selmer-cache <version> <kind>\n
///   sha256 <hex of payload>\n
///   <payload json>
/// written to a temporary name and renamed into place. Keys are hashes of mathematical
/// inputs only. Bad checksums, version mismatches or failed rechecks make load() return
/// nothing and leave a warning; the caller recomputes and overwrites.
class Cache {
public:
    static constexpr int kVersion = 1;

    /// An empty directory disables the cache.
    explicit Cache(std::string dir = {}, int version = kVersion);

    bool enabled() const { return !dir_.empty(); }
    static std::string key_of(const Json& inputs);

    std::optional<Json> load(const std::string& kind, const std::string& key);
    void store(const std::string& kind, const std::string& key, const Json& payload);
    std::string path_of(const std::string& kind, const std::string& key) const;

    /// Notes the use of a record in the provenance list (kind/key, sorted, unique).
    void touch(const std::string& kind, const std::string& key);
    const std::map<std::string, std::string>& used() const { return used_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    void warn(const std::string& w);

private:
    std::string dir_;
    int version_;
    std::map<std::string, std::string> used_;
    std::vector<std::string> warnings_;
};

template <int N>
Json encode_classes(const orders::ClassSet<N>& S);
template <int N>
orders::ClassSet<N> decode_classes(std::shared_ptr<const orders::Tower<N>> T, const orders::Level& lv, const Json& j);

Json encode_eigenform(const brandt::Eigenform& f);
brandt::Eigenform decode_eigenform(const Json& j);

/// Class set through the cache. key_inputs must determine the tower; the level is added.
template <int N>
std::shared_ptr<const orders::ClassSet<N>> cached_classes(Cache& c, std::shared_ptr<const orders::Tower<N>> T,
                                                          const orders::Level& lv, const Json& key_inputs,
                                                          std::size_t budget);

}  // namespace selmer::cli
