#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "selmer/cache.hpp"
#include "selmer/config.hpp"
#include "selmer/error.hpp"
#include "selmer/pipeline.hpp"
#include "selmer/report.hpp"

using namespace selmer;
using namespace selmer::cli;
namespace fs = std::filesystem;

namespace {

const std::string src = SELMER_SOURCE_DIR;

Json read_json(const std::string& path) {
    std::ifstream in(path);
    return Json::parse(in);
}

std::string message_of(const Json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.exit_code() == 2);
        return e.what();
    }
    return "";
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("selmer_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("config loading and validation") {
    auto c = load_config(src + "/configs/desk_even.json");
    CHECK(c.field_d == 2);
    CHECK(c.p == 19);
    CHECK(c.A.conductor_ideal->norm() == 17);
    auto c2 = load_config(src + "/configs/desk_even.json");
    CHECK(sha256_hex(c.to_json().dump()) == sha256_hex(c2.to_json().dump()));
    CHECK(parse_config(c.to_json()).to_json() == c.to_json());

    Json base = read_json(src + "/configs/desk_even.json");
    Json j = base;
    j["bounds"]["prime_scn"] = 5;
    CHECK(message_of(j).find("bounds.prime_scn: unknown key") != std::string::npos);
    j = base;
    j.erase("p");
    CHECK(message_of(j).find("p: missing") != std::string::npos);
    j = base;
    j["p"] = 21;
    CHECK(message_of(j).find("p: must be prime") != std::string::npos);
    j = base;
    j["field"]["d"] = 3;
    CHECK(message_of(j).find("field.d") != std::string::npos);
    j = base;
    j["curveE"]["conductor"] = 13;
    CHECK(message_of(j).find("curveE") != std::string::npos);
    j = base;
    j["curveA"]["conductor_norm"] = 289;
    CHECK(message_of(j).find("curveA.conductor_norm") != std::string::npos);
    j = base;
    j["curveA"]["a"][2] = 7;
    CHECK(message_of(j).find("curveA.a[2]") != std::string::npos);
    j = base;
    j["exclusions"] = {3, 4};
    CHECK(message_of(j).find("exclusions[1]") != std::string::npos);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("structured report round trip") {
    ReportDocument d;
    d.sections["period"] = {{"op", "kolyvagin.find_testing_factors"}, {"entries", Json::array({{{"d", 1}, {"value", "123456789012345678901234567890"}}})}};
    d.sections["admissible_scan"] = {{"op", "admissible.scan"}, {"records", Json::array()}, {"p", 17}, {"neg", -3}};
    d.provenance = {{"config_hash", "abc"}, {"tool_version", tool_version()}};
    CHECK(parse_report(emit_report(d, Format::structured)) == d);
    d.timing = {{"setup", 0.5}};
    CHECK(parse_report(emit_report(d, Format::structured)) == d);
    auto text = emit_report(d, Format::text);
    CHECK(text.find("config hash: abc") != std::string::npos);
    CHECK(text.find("[period]") < text.find("[provenance]"));
    CHECK(text.find("records: (none)") != std::string::npos);
    CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("cache round trip, corruption and version bump") {
    TempDir dir("cache");
    auto T = orders::build_tower(11, 1);
    Json key = {{"set", "T"}, {"D", 11}, {"top", 1}};
    std::shared_ptr<const orders::ClassSetT> first;
    {
        Cache c(dir.path.string());
        first = cached_classes<4>(c, T, T->top, key, 1000);
        CHECK(c.warnings().empty());
    }
    std::string path;
    {
        Cache c(dir.path.string());
        auto again = cached_classes<4>(c, T, T->top, key, 1000);
        CHECK(c.warnings().empty());
        CHECK(encode_classes<4>(*again) == encode_classes<4>(*first));
        for (std::size_t i = 0; i < first->size(); ++i) CHECK(again->classes[i].ideal == first->classes[i].ideal);
        path = c.path_of("classes_T", c.used().begin()->first.substr(10));
    }
    std::string stored = slurp(path);
    {
        // two readers of a finished record see the same payload
        Cache a(dir.path.string()), b(dir.path.string());
        std::string k = fs::path(path).stem().string().substr(10);
        CHECK(a.load("classes_T", k) == b.load("classes_T", k));
    }
    {
        std::string bad = stored;
        bad[bad.size() - 5] = bad[bad.size() - 5] == '1' ? '2' : '1';
        std::ofstream(path, std::ios::binary) << bad;
        Cache c(dir.path.string());
        auto re = cached_classes<4>(c, T, T->top, key, 1000);
        CHECK(c.warnings().size() == 1);
        CHECK(encode_classes<4>(*re) == encode_classes<4>(*first));
        CHECK(slurp(path) == stored);
    }
    {
        Cache c(dir.path.string(), Cache::kVersion + 1);
        auto re = cached_classes<4>(c, T, T->top, key, 1000);
        CHECK(c.warnings().size() == 1);
        CHECK(encode_classes<4>(*re) == encode_classes<4>(*first));
    }
    {
        // a record whose classes fail the mass formula is rejected, not trusted
        Json j = encode_classes<4>(*first);
        j["classes"].erase(j["classes"].size() - 1);
        Cache c(dir.path.string());
        std::string k = fs::path(path).stem().string().substr(10);
        c.store("classes_T", k, j);
        auto re = cached_classes<4>(c, T, T->top, key, 1000);
        CHECK(c.warnings().size() == 1);
        CHECK(re->size() == first->size());
    }
    auto f = decode_eigenform(encode_eigenform(brandt::Eigenform{{2, -3}, {1, -1}, {{2, -2}}, {{"2", -2}}, true}));
    CHECK(f.vector == std::vector<arith::i64>{2, -3});
    CHECK(f.eigenvalues.at(2) == -2);
}

TEST_CASE("commands") {
    auto c = load_config(src + "/configs/desk_odd.json");
    RunFlags fl;
    auto d = run_command("classify", &c, fl);
    CHECK(d.sections["parity"]["type"] == "odd");
    CHECK(d.sections["parity"]["epsilon"] == -1);
    CHECK(d.sections["classification"]["kind"] == "B");
    CHECK(d.timing.is_null());
    for (auto it = d.sections.begin(); it != d.sections.end(); ++it) CHECK(it.value().contains("op"));

    auto full = run_command("predict", &c, fl);
    std::vector<std::string> names;
    for (auto it = full.sections.begin(); it != full.sections.end(); ++it) {
        names.push_back(it.key());
        CHECK_MESSAGE(it.value().contains("op"), it.key());
    }
    CHECK(names == std::vector<std::string>{"admissible_scan", "class_sets", "classification", "congruence_evaluations",
                                            "eigenforms", "kolyvagin_constants", "parity", "verdict"});
    CHECK(full.sections["verdict"]["status"] == "conditional-rank-1");

    // a scan bound below the first admissible prime still yields the section
    fl.bound = 100;
    auto a = run_command("admissible", &c, fl);
    CHECK(a.sections["admissible_scan"]["n_admissible"]["records"] == Json::array());
    CHECK(a.sections["admissible_scan"]["n_admissible"]["count"] == 0);

    RunFlags cs;
    cs.D = 11;
    auto s = run_command("class-set", nullptr, cs);
    auto& set = s.sections["class_sets"]["sets"][0];
    CHECK(set["size"] == 2);
    CHECK(set["mass"] == "5/6");
    CHECK(set["mass_certified"] == true);

    CHECK_THROWS_AS(run_command("eigenform", nullptr, fl), Error);
    CHECK_THROWS_AS(run_command("frobnicate", &c, fl), Error);
    try {
        run_command("period", &c, RunFlags{});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.exit_code() == 2);
        CHECK(e.module() == "cli");
    }
}

TEST_CASE("determinism, warm cache and the golden file") {
    TempDir dir("det");
    auto c = load_config(src + "/configs/desk_odd.json");
    RunFlags cold;
    auto r1 = emit_report(run_command("classify", &c, cold), Format::structured);
    auto r2 = emit_report(run_command("classify", &c, cold), Format::structured);
    CHECK(r1 == r2);
    RunFlags warm;
    warm.cache_dir = dir.path.string();
    auto w1 = emit_report(run_command("eigenform", &c, warm), Format::structured);
    auto w2 = emit_report(run_command("eigenform", &c, warm), Format::structured);
    CHECK(w1 == w2);
    warm.timing = true;
    auto w3 = run_command("eigenform", &c, warm);
    CHECK(w3.timing.is_object());
    w3.timing = Json();
    CHECK(emit_report(w3, Format::structured) == w1);

    fs::path golden = fs::path(src) / "tests" / "golden" / "desk_odd_classify.json";
    if (!fs::exists(golden)) {
        fs::create_directories(golden.parent_path());
        std::ofstream(golden, std::ios::binary) << r1;
        WARN_MESSAGE(false, "golden file frozen at " << golden.string());
    } else {
        CHECK(slurp(golden) == r1);
    }
}
