// mpt: expand generating series, emit perverse Hodge tables, run checks.
//
// Exit codes: 0 ok, 1 failed check, 2 unknown series id or check name,
// 3 q-order too small for the requested tables.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mpt/checks.hpp"
#include "mpt/enriques.hpp"
#include "mpt/json_io.hpp"
#include "mpt/perverse.hpp"
#include "mpt/qfunc.hpp"

namespace fs = std::filesystem;
using namespace mpt;

namespace {

struct Options {
    std::string q_order = "8";
    std::string p_window = "-10:10";
    std::string d_range = "0:4";
    std::string betti_file;
    std::string hodge_file;
    std::string format = "md";
    std::string out_dir;
    std::string checks;
    bool eta_no_prefactor = false;
    int order = 6;
};

struct UsageError : std::runtime_error {
    int code;
    UsageError(const std::string &m, int c) : std::runtime_error(m), code(c) {}
};

std::pair<long, long> parse_range(const std::string &text, const char *what)
{
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            long v = std::stol(text);
            return {v, v};
        }
        return {std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
    } catch (const std::exception &) {
        throw CLI::ValidationError(what, "expected N or LO:HI, got '" + text + "'");
    }
}

int64_t q_cut(const Options &o)
{
    Rational r = parse_rational(o.q_order) * kDenoms[0];
    if (r.get_den() != 1 || sgn(r) <= 0) {
        throw CLI::ValidationError("--q-order", "must be a positive multiple of 1/24");
    }
    return r.get_num().get_si();
}

int64_t p_hi(const Options &o)
{
    auto [lo, hi] = parse_range(o.p_window, "--p-window");
    if (lo > hi) {
        throw CLI::ValidationError("--p-window", "LO must not exceed HI");
    }
    return scaled(Var::p, hi);
}

BettiTable betti(const Options &o)
{
    return o.betti_file.empty() ? BettiTable::defaults() : BettiTable::load(o.betti_file);
}

HodgeInputs hodge(const Options &o)
{
    return o.hodge_file.empty() ? HodgeInputs::defaults() : load_hodge_inputs(o.hodge_file);
}

void emit(const Options &o, const std::string &file, const std::string &text)
{
    if (o.out_dir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(o.out_dir);
    std::ofstream(fs::path(o.out_dir) / file) << text;
}

using Builder = std::function<Series(const Options &)>;

const std::map<std::string, Builder> &series_ids()
{
    static const std::map<std::string, Builder> ids{
        {"pt-fiber", [](const Options &o) { return pt_fiber_series(q_cut(o)); }},
        {"pt-fiber-full", [](const Options &o) { return pt_fiber_full(q_cut(o), p_hi(o), hodge(o)); }},
        {"keyeq-rhs1", [](const Options &o) { return keyeq_rhs1(q_cut(o)); }},
        {"keyeq-rhs2", [](const Options &o) { return keyeq_rhs2(betti(o), q_cut(o)); }},
        {"ky-logZ", [](const Options &o) { return ky_logZ_series(q_cut(o)); }},
        {"asympt-gf", [](const Options &o) { return asympt_gf(o.order); }},
        {"betti-infty", [](const Options &o) { return betti_infty_gf(o.order); }},
        {"omega-half-integral", [](const Options &o) { return omega_half_integral(q_cut(o)); }},
    };
    return ids;
}

// Cache key: every option that can influence the expansion.
std::string cache_name(const std::string &id, const Options &o)
{
    std::string key = id + "|" + o.q_order + "|" + o.p_window + "|" + std::to_string(o.order) + "|" +
                      o.betti_file + "|" + o.hodge_file;
    return id + "-" + std::to_string(std::hash<std::string>{}(key)) + ".json";
}

int cmd_expand(const std::string &id, const Options &o)
{
    auto it = series_ids().find(id);
    if (it == series_ids().end()) {
        std::string known;
        for (const auto &[k, _] : series_ids()) {
            known += " " + k;
        }
        throw UsageError("unknown series id '" + id + "'; known:" + known, 2);
    }
    std::string text;
    const char *cache = std::getenv("SERIES_CACHE_DIR");
    fs::path cached = cache ? fs::path(cache) / cache_name(id, o) : fs::path();
    if (cache && fs::exists(cached)) {
        std::ifstream in(cached);
        // Round trip through the parser so a stale or foreign file is rejected.
        text = dump(series_to_json(series_from_json(nlohmann::json::parse(in))));
    } else {
        text = dump(series_to_json(it->second(o)));
        if (cache) {
            fs::create_directories(cache);
            std::ofstream(cached) << text;
        }
    }
    emit(o, id + ".json", text);
    return 0;
}

std::string render(const PerverseTable &t, const std::string &format)
{
    if (format == "md") {
        return t.to_markdown();
    }
    if (format == "csv") {
        return t.to_csv();
    }
    return t.to_json();
}

int cmd_tables(const Options &o)
{
    auto [lo, hi] = parse_range(o.d_range, "--d");
    if (lo < 0 || lo > hi) {
        throw CLI::ValidationError("--d", "need 0 <= LO <= HI");
    }
    const int64_t cut = q_cut(o);
    if (scaled(Var::q, hi) >= cut) {
        throw UsageError("--q-order " + o.q_order + " does not reach d = " + std::to_string(hi) +
                             "; need at least " + std::to_string(hi + 1),
                         3);
    }
    const std::string ext = o.format == "md" ? "md" : o.format;
    Series diff = keyeq_difference(betti(o), scaled(Var::q, hi) + 1);
    for (long d = lo; d <= hi; ++d) {
        PerverseTable t = perverse_table_from(diff, static_cast<int>(d));
        std::string head = o.format == "md" ? "### ^p h^{i,j}_" + std::to_string(d) + "\n\n" : "";
        emit(o, "perverse_d" + std::to_string(d) + "." + ext, head + render(t, o.format) + (o.format == "md" ? "\n" : ""));
    }
    // Fiber classes: one table for d odd and one for d even.
    HodgeInputs h = hodge(o);
    auto gv = gv_refined_extract(
        [&h](int64_t ph) { return betti_realization(pt_fiber_full(scaled(Var::q, 2) + 1, ph, h)); },
        scaled(Var::p, 4));
    for (int d : {1, 2}) {
        const std::string label = d == 1 ? "odd" : "even";
        PerverseTable t = perverse_table_from_gv(gv.at(d), d);
        std::string head = o.format == "md" ? "### fiber classes, d " + label + "\n\n" : "";
        emit(o, "fiber_" + label + "." + ext, head + render(t, o.format) + (o.format == "md" ? "\n" : ""));
    }
    return 0;
}

int cmd_check(const Options &o)
{
    CheckConfig cfg;
    cfg.eta_prefactor = !o.eta_no_prefactor;
    cfg.betti = betti(o);
    cfg.hodge = hodge(o);
    std::vector<std::string> names;
    if (o.checks.empty() || o.checks == "all") {
        for (const auto &c : check_catalog()) {
            names.push_back(c.name);
        }
    } else {
        std::stringstream ss(o.checks);
        for (std::string n; std::getline(ss, n, ',');) {
            bool known = false;
            for (const auto &c : check_catalog()) {
                known = known || c.name == n;
            }
            if (!known) {
                throw UsageError("unknown check '" + n + "'", 2);
            }
            names.push_back(n);
        }
    }
    auto results = run_checks(names, cfg);
    emit(o, "check_report.json", dump(report_json(results)));
    bool all = true;
    for (const auto &r : results) {
        if (!r.passed) {
            all = false;
            std::cerr << "FAIL " << r.name << ": " << r.first_mismatch.value_or("") << '\n';
        }
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Motivic PT/DT series, perverse Hodge tables and identity checks"};
    app.require_subcommand(1);
    Options o;
    auto common = [&o](CLI::App *s) {
        s->add_option("--q-order", o.q_order, "exclusive q cutoff (rational)")->capture_default_str();
        s->add_option("--betti-file", o.betti_file, "Betti numbers JSON")->check(CLI::ExistingFile);
        s->add_option("--hodge-file", o.hodge_file, "Hodge inputs JSON")->check(CLI::ExistingFile);
        s->add_option("--out", o.out_dir, "output directory (default stdout)");
    };

    std::string id;
    auto *expand = app.add_subcommand("expand", "expand a generating series to canonical JSON");
    expand->add_option("id", id, "series id")->required();
    common(expand);
    expand->add_option("--p-window", o.p_window, "valid p range LO:HI")->capture_default_str();
    expand->add_option("--order", o.order, "total degree for asympt-gf / betti-infty")->capture_default_str();

    auto *tables = app.add_subcommand("tables", "perverse Hodge tables");
    common(tables);
    tables->add_option("--d", o.d_range, "d or LO:HI")->capture_default_str();
    tables->add_option("--format", o.format, "md, csv or json")
        ->check(CLI::IsMember({"md", "csv", "json"}))
        ->capture_default_str();

    auto *check = app.add_subcommand("check", "run named identity checks");
    common(check);
    check->add_option("--checks", o.checks, "comma-separated names or 'all'");
    check->add_flag("--eta-no-prefactor", o.eta_no_prefactor, "drop eta's q^{1/24} (negative control)");

    try {
        app.parse(argc, argv);
        if (*expand) {
            return cmd_expand(id, o);
        }
        if (*tables) {
            return cmd_tables(o);
        }
        return cmd_check(o);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
