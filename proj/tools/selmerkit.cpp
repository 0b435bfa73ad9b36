#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "selmer/error.hpp"
#include "selmer/pipeline.hpp"

using namespace selmer;
using arith::i64;
using arith::u64;

int main(int argc, char** argv) {
    CLI::App app{"selmerkit: Brandt modules, admissible primes and period sums for (E, A) over a real quadratic field"};
    app.require_subcommand(1, 1);
    std::string config, format = "text", exclude;
    cli::RunFlags fl;
    u64 bound = 0, p = 0;
    int n = 0;
    i64 D = 0, M = 0;

    const std::map<std::string, std::string> about = {
        {"classify", "pair classification, Assumption E and parity"},
        {"class-set", "oriented class sets with their masses (--D/--M for a bare set)"},
        {"brandt", "Brandt matrices on the base class set"},
        {"eigenform", "newform functions g and f from Frobenius traces"},
        {"admissible", "good prime audit, admissible and strongly admissible scans"},
        {"period", "testing factors and period sums"},
        {"predict", "everything above plus constants, congruences and the verdict"}};
    for (const auto& name : cli::command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config, "instance config (JSON)");
        sub->add_option("--cache", fl.cache_dir, "cache directory");
        sub->add_option("--bound", bound, "prime scan bound (class-set/brandt: Hecke prime bound)");
        sub->add_option("--p", p, "override p");
        sub->add_option("--n", n, "override n");
        sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
        sub->add_option("--exclude", exclude, "extra primes for the A1 modulus, comma separated");
        sub->add_flag("--timing", fl.timing, "include timing data");
        if (name == "class-set" || name == "brandt") {
            sub->add_option("--D", D, "discriminant of the definite algebra over Q");
            sub->add_option("--M", M, "Eichler level");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (bound) fl.bound = bound;
        if (p) fl.p = p;
        if (n) fl.n = n;
        if (D) fl.D = D;
        if (M) fl.M = M;
        if (!exclude.empty()) {
            std::stringstream ss(exclude);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    fl.exclude.push_back(std::stoull(tok));
                } catch (const std::exception&) {
                    fail_pre("cli", "flags", "bad --exclude entry '" + tok + "'");
                }
            }
        }
        std::optional<cli::InstanceConfig> cfg;
        if (!config.empty()) cfg = cli::load_config(config);
        auto doc = cli::run_command(cmd, cfg ? &*cfg : nullptr, fl);
        std::cout << cli::emit_report(doc, cli::parse_format(format));
        return 0;
    } catch (const Error& e) {
        const char* kind = e.kind() == ErrorKind::precondition ? "precondition" : e.kind() == ErrorKind::budget ? "budget" : "internal";
        std::cerr << "error (" << kind << "): " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 4;
    }
}
