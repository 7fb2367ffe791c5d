#include "apseq/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "apseq/asymptotics.hpp"
#include "apseq/counting.hpp"
#include "apseq/enumeration.hpp"
#include "apseq/error.hpp"
#include "apseq/groups.hpp"
#include "apseq/las.hpp"
#include "apseq/montecarlo.hpp"
#include "apseq/nonabelian.hpp"

namespace apseq::cli {

namespace {

using Json = nlohmann::ordered_json;

Json element_json(const Element& x) {
    if (x.dim() == 1) return x.coords[0];
    return Json(x.coords);
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void emit(std::ostream& out, const std::string& command, Json params, Json result,
          std::optional<std::uint64_t> seed = std::nullopt) {
    Json env;
    env["command"] = command;
    env["params"] = std::move(params);
    env["result"] = std::move(result);
    env["tool_version"] = APSEQ_TOOL_VERSION;
    env["seed"] = seed ? Json(*seed) : Json(nullptr);
    out << env.dump(2) << '\n';
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    return parts;
}

std::int64_t to_int(const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used > 0 && used == s.size(), "not an integer: '" + s + "'");
    return v;
}

std::filesystem::path cache_dir_from(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("APSEQ_CACHE_DIR"); env && *env) return env;
    return {};
}

Json counts_json(const std::vector<std::uint64_t>& counts) {
    // k = 1 .. |A|; index 0 (L = 0) is always empty.
    return Json(std::vector<std::uint64_t>(counts.begin() + (counts.empty() ? 0 : 1), counts.end()));
}

Json histogram_json(const LHistogram& h) {
    Json counts = Json::object();
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
        if (h.counts[k]) counts[std::to_string(k)] = h.counts[k];
    }
    return counts;
}

Ordering ordering_from_flags(const AdditiveSetSpec& set, const std::string& sequence, const std::string& coords) {
    require(sequence.empty() != coords.empty(), "give exactly one of --sequence or --coords");
    if (!coords.empty()) {
        std::vector<Element> elems;
        for (const auto& tuple : split(coords, ';')) {
            std::vector<std::int64_t> c;
            for (const auto& v : split(tuple, ',')) c.push_back(to_int(v));
            elems.emplace_back(std::move(c));
        }
        return Ordering::from_elements(set, elems);
    }
    std::vector<std::int64_t> entries;
    for (const auto& v : split(sequence, ',')) entries.push_back(to_int(v));
    if (set.dim() == 1) {
        // One-dimensional sets take the elements themselves: residues for
        // Z/nZ (equal to their indices), integers of [1,n] for the interval.
        std::vector<Element> elems;
        for (auto v : entries) elems.push_back(Element{v});
        return Ordering::from_elements(set, elems);
    }
    std::vector<std::uint32_t> idx;
    for (auto v : entries) {
        require(v >= 0 && static_cast<std::uint64_t>(v) < set.size(),
                "index " + std::to_string(v) + " out of range for " + set.to_string());
        idx.push_back(static_cast<std::uint32_t>(v));
    }
    return Ordering(set, std::move(idx));
}

std::string golden_file(const std::string& family) {
    return family == "interval" ? "table1_interval.csv" : "table2_cyclic.csv";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InternalError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void verify_checksum(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
    const auto sums = read_file(dir / "checksums.txt");
    for (const auto& line : split(sums, '\n')) {
        std::istringstream is(line);
        std::string hex, file;
        if (!(is >> hex >> file) || file != name) continue;
        if (hex != hex64(fnv1a64(body))) throw InternalError("golden file " + name + " does not match its checksum");
        return;
    }
    throw InternalError("no checksum recorded for golden file " + name);
}

// Row n -> f(1..n) from a golden CSV.
std::map<std::uint64_t, std::vector<std::uint64_t>> parse_golden(const std::string& body) {
    std::map<std::uint64_t, std::vector<std::uint64_t>> rows;
    const auto lines = split(body, '\n');
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto cells = split(lines[i], ',');
        const auto n = static_cast<std::uint64_t>(to_int(cells.at(0)));
        std::vector<std::uint64_t> vals;
        for (std::size_t c = 1; c < cells.size() && c <= n; ++c) vals.push_back(static_cast<std::uint64_t>(to_int(cells[c])));
        rows[n] = vals;
    }
    return rows;
}

struct Dispatcher {
    std::ostream& out;
    std::ostream& err;
    Limits limits;
    std::function<int()> action;

    void add_count(CLI::App& app) {
        struct Args {
            std::string set, method = "closed";
            std::int64_t k = 0;
            bool json = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("count", "Count progression k-orderings of a set");
        sub->add_option("--set", a->set, "Set spec, e.g. cyclic:12 or interval:5,2")->required();
        sub->add_option("--k", a->k, "Progression length")->required();
        sub->add_option("--method", a->method, "closed | brute | bounds")
            ->check(CLI::IsMember({"closed", "brute", "bounds"}));
        sub->add_flag("--json", a->json, "JSON output (the default)");
        sub->callback([this, a] {
            action = [this, a] {
                const auto& [spec, method, k, json] = *a;
                const auto set = AdditiveSetSpec::parse(spec, limits);
                CountResult r;
                if (method == "closed") {
                    r = count_closed_form(set, k);
                } else if (method == "brute") {
                    r = brute_force_count(set, k, limits);
                } else if (set.family() == Family::IntervalBox) {
                    require(set.dim() == 1, "bounds are available for interval:n (d = 1) and group families");
                    r = bounds_interval(set.n(), k);
                } else {
                    r = bounds_abelian(set, k);
                }
                Json res;
                res["set"] = set.to_string();
                res["k"] = k;
                if (r.exact) res["exact"] = *r.exact;
                res["lower"] = r.lower;
                res["upper"] = r.upper;
                res["method"] = std::string(method_name(r.method));
                emit(out, "count", {{"set", set.to_string()}, {"k", k}, {"method", method}}, res);
                return Ok;
            };
        });
    }

    void add_las(CLI::App& app) {
        struct Args {
            std::string set, sequence, coords, algorithm = "auto";
            bool witness = false, json = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("las", "Longest progression subsequence of an ordering");
        sub->add_option("--set", a->set, "Set spec")->required();
        sub->add_option("--sequence", a->sequence,
                        "Comma-separated ordering: elements for one-dimensional sets, canonical indices otherwise");
        sub->add_option("--coords", a->coords, "Ordering as coordinate tuples, e.g. 1,1;1,2;2,1;2,2");
        sub->add_option("--algorithm", a->algorithm, "auto | orbit | pairdp")
            ->check(CLI::IsMember({"auto", "orbit", "pairdp"}));
        sub->add_flag("--witness", a->witness, "Include a witness progression");
        sub->add_flag("--json", a->json, "JSON output (the default)");
        sub->callback([this, a] {
            action = [this, a] {
                const auto set = AdditiveSetSpec::parse(a->set, limits);
                const auto ord = ordering_from_flags(set, a->sequence, a->coords);
                const auto r = a->algorithm == "orbit"    ? longest_ap_orbitwalk(ord, limits)
                               : a->algorithm == "pairdp" ? longest_ap_pairdp(ord, limits)
                                                          : longest_ap(ord, limits);
                if (!verify_witness(ord, r)) throw InternalError("longest progression witness failed to verify");
                Json res;
                res["set"] = set.to_string();
                res["length"] = r.length;
                if (a->witness) {
                    res["witness"] = {{"base", element_json(r.witness.base)},
                                      {"step", element_json(r.witness.step)},
                                      {"length", r.witness.length},
                                      {"positions", r.positions}};
                }
                Json params{{"set", set.to_string()}, {"algorithm", a->algorithm}, {"witness", a->witness}};
                if (!a->sequence.empty()) params["sequence"] = a->sequence;
                if (!a->coords.empty()) params["coords"] = a->coords;
                emit(out, "las", params, res);
                return Ok;
            };
        });
    }

    void add_enumerate(CLI::App& app) {
        struct Args {
            std::vector<std::string> sets;
            unsigned parallel = 0;
            std::string csv, cache;
            bool symmetry = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("enumerate", "Exact distribution of L over all orderings");
        sub->add_option("--set", a->sets, "Set spec (repeatable, one row each)")->required();
        sub->add_option("--parallel", a->parallel, "Worker threads; enables |A| up to 12");
        sub->add_option("--csv", a->csv, "Write the table as CSV to this path ('-' for stdout)");
        sub->add_option("--cache", a->cache, "Cache directory (default $APSEQ_CACHE_DIR)");
        sub->add_flag("--symmetry", a->symmetry, "Enumerate orbit representatives and reweight");
        sub->callback([this, a] {
            action = [this, a] {
                EnumerationOptions opt{a->parallel, a->symmetry, limits};
                const auto dir = cache_dir_from(a->cache);
                std::vector<DistributionTable> tables;
                std::size_t columns = 0;
                for (const auto& s : a->sets) {
                    tables.push_back(distribution_cached(AdditiveSetSpec::parse(s, limits), opt, dir));
                    columns = std::max<std::size_t>(columns, tables.back().set.size());
                }
                const auto csv = distribution_csv(tables, columns);
                if (a->csv == "-") {
                    out << csv;
                    return Ok;
                }
                if (!a->csv.empty()) {
                    std::ofstream f(a->csv);
                    if (!f) throw InvalidArgument("cannot write " + a->csv);
                    f << csv;
                }
                Json rows = Json::array();
                Json specs = Json::array();
                for (const auto& t : tables) {
                    rows.push_back({{"set", t.set.to_string()}, {"total", t.total}, {"counts", counts_json(t.counts)}});
                    specs.push_back(t.set.to_string());
                }
                emit(out, "enumerate", {{"set", specs}, {"symmetry", a->symmetry}}, {{"rows", rows}});
                return Ok;
            };
        });
    }

    void add_predict(CLI::App& app) {
        struct Args {
            std::string set, mode = "interp";
            bool json = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("predict", "Solve the threshold equation for psi, chi or tau");
        sub->add_option("--set", a->set, "Set spec: interval, cyclic or elementary")->required();
        sub->add_option("--mode", a->mode, "interp | smooth")->check(CLI::IsMember({"interp", "smooth"}));
        sub->add_flag("--json", a->json, "JSON output (the default)");
        sub->callback([this, a] {
            action = [this, a] {
                const auto set = AdditiveSetSpec::parse(a->set, limits);
                const auto r = solve_threshold(set, parse_mode(a->mode));
                Json res;
                res["set"] = set.to_string();
                res["value"] = r.value;
                res["window"] = {r.floor, r.ceil};
                res["asymptotic"] = r.asymptotic ? Json(*r.asymptotic) : Json(nullptr);
                res["boundary_clamped"] = r.boundary_clamped;
                res["residual"] = r.residual;
                res["mode"] = std::string(mode_name(r.mode));
                emit(out, "predict", {{"set", set.to_string()}, {"mode", a->mode}}, res);
                return Ok;
            };
        });
    }

    void add_simulate(CLI::App& app) {
        struct Args {
            std::string set;
            std::uint64_t samples = 0, seed = 0;
            std::optional<std::int64_t> k;
            bool coverage = false, histogram = false, json = false, csv = false;
            unsigned parallel = 1;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("simulate", "Monte Carlo experiments on random orderings");
        sub->add_option("--set", a->set, "Set spec")->required();
        sub->add_option("--samples", a->samples, "Number of sampled orderings")->required();
        sub->add_option("--seed", a->seed, "64-bit seed (required)")->required();
        auto* k = sub->add_option("--k", a->k, "Estimate E{N_k}");
        auto* cov = sub->add_flag("--coverage", a->coverage, "Mass of L on the threshold window");
        auto* hist = sub->add_flag("--histogram", a->histogram, "Distribution of L (the default)");
        k->excludes(cov)->excludes(hist);
        cov->excludes(hist);
        sub->add_option("--parallel", a->parallel, "Worker threads (results do not depend on this)");
        auto* js = sub->add_flag("--json", a->json, "JSON output (the default)");
        auto* cs = sub->add_flag("--csv", a->csv, "CSV output");
        js->excludes(cs);
        sub->callback([this, a] {
            action = [this, a] {
                ExperimentConfig cfg;
                cfg.set = AdditiveSetSpec::parse(a->set, limits);
                cfg.samples = a->samples;
                cfg.seed = a->seed;
                cfg.k = a->k;
                cfg.threads = a->parallel;
                cfg.limits = limits;
                // Thread count is left out of the echo: it never changes the result.
                Json params{{"set", cfg.set.to_string()}, {"samples", a->samples}};
                Json res;
                std::ostringstream csv;
                if (a->k) {
                    params["k"] = *a->k;
                    const auto s = estimate_Nk_mean(cfg);
                    res = {{"kind", "nk"},           {"k", *a->k},         {"samples", s.samples},
                           {"mean", s.mean},          {"std_error", s.std_error}, {"expected", s.expected},
                           {"z", finite_or_null(s.z)}};
                    csv << "k,samples,mean,std_error,expected,z\n"
                        << *a->k << ',' << s.samples << ',' << Json(s.mean).dump() << ','
                        << Json(s.std_error).dump() << ',' << Json(s.expected).dump() << ','
                        << (std::isfinite(s.z) ? Json(s.z).dump() : "") << '\n';
                } else if (a->coverage) {
                    params["coverage"] = true;
                    const auto c = coverage_experiment(cfg);
                    res = {{"kind", "coverage"},
                           {"samples", c.histogram.samples},
                           {"value", c.threshold.value},
                           {"window", {c.threshold.floor, c.threshold.ceil}},
                           {"coverage", c.coverage},
                           {"mode", c.histogram.mode()},
                           {"mode_in_window", c.mode_in_window},
                           {"counts", histogram_json(c.histogram)}};
                    csv << "samples,value,window_lo,window_hi,coverage,mode,mode_in_window\n"
                        << c.histogram.samples << ',' << Json(c.threshold.value).dump() << ',' << c.threshold.floor
                        << ',' << c.threshold.ceil << ',' << Json(c.coverage).dump() << ',' << c.histogram.mode()
                        << ',' << (c.mode_in_window ? "true" : "false") << '\n';
                } else {
                    params["histogram"] = true;
                    const auto h = empirical_L_distribution(cfg);
                    res = {{"kind", "histogram"}, {"samples", h.samples}, {"mode", h.mode()},
                           {"counts", histogram_json(h)}};
                    csv << "k,count,fraction\n";
                    for (std::size_t l = 1; l < h.counts.size(); ++l) {
                        if (h.counts[l]) csv << l << ',' << h.counts[l] << ',' << Json(h.fraction(l)).dump() << '\n';
                    }
                }
                if (a->csv) {
                    out << csv.str();
                } else {
                    emit(out, "simulate", params, res, a->seed);
                }
                return Ok;
            };
        });
    }

    void add_nonabelian(CLI::App& app) {
        struct Args {
            std::string group;
            std::int64_t k = 0;
            bool json = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("nonabelian", "Left and right progressions in a dihedral group");
        sub->add_option("--group", a->group, "dihedral:n")->required();
        sub->add_option("--k", a->k, "Progression length")->required();
        sub->add_flag("--json", a->json, "JSON output (the default)");
        sub->callback([this, a] {
            action = [this, a] {
                const std::string prefix = "dihedral:";
                require(a->group.rfind(prefix, 0) == 0, "only dihedral:n groups are supported, got '" + a->group + "'");
                const auto n = to_int(a->group.substr(prefix.size()));
                const auto left = left_ap_count(n, a->k);
                const auto right = right_ap_count(n, a->k);
                Json res{{"group", a->group},
                         {"order", 2 * n},
                         {"k", a->k},
                         {"left", left},
                         {"right", right},
                         {"equal", left == right},
                         {"inversion_bijection", inversion_bijection_on_progressions(n, a->k)}};
                emit(out, "nonabelian", {{"group", a->group}, {"k", a->k}}, res);
                return Ok;
            };
        });
    }

    void add_tables(CLI::App& app) {
        struct Args {
            std::string family, cache, golden = APSEQ_GOLDEN_DIR;
            std::uint64_t max_n = 0;
            unsigned parallel = 0;
            bool symmetry = false;
        };
        auto a = std::make_shared<Args>();
        auto* sub = app.add_subcommand("tables", "Regenerate the exact tables and diff them against golden files");
        sub->add_option("--family", a->family, "interval | cyclic")
            ->required()
            ->check(CLI::IsMember({"interval", "cyclic"}));
        sub->add_option("--max-n", a->max_n, "Largest n")->required()->check(CLI::Range(1, 12));
        sub->add_option("--parallel", a->parallel, "Worker threads; needed past n = 10");
        sub->add_option("--cache", a->cache, "Cache directory (default $APSEQ_CACHE_DIR)");
        sub->add_option("--golden-dir", a->golden, "Directory holding the golden CSVs");
        sub->add_flag("--symmetry", a->symmetry, "Enumerate orbit representatives and reweight");
        sub->callback([this, a] {
            action = [this, a] {
                EnumerationOptions opt{a->parallel, a->symmetry, limits};
                const auto dir = cache_dir_from(a->cache);
                std::vector<DistributionTable> tables;
                for (std::uint64_t n = 1; n <= a->max_n; ++n) {
                    const auto set = a->family == "interval" ? AdditiveSetSpec::interval(static_cast<std::int64_t>(n))
                                                             : AdditiveSetSpec::cyclic(static_cast<std::int64_t>(n));
                    tables.push_back(distribution_cached(set, opt, dir));
                }
                out << distribution_csv(tables, a->max_n);

                for (const auto& t : tables) {
                    if (t.set.size() < 2) continue;
                    const auto th = solve_threshold(t.set);
                    const double mass = static_cast<double>(t.count(th.floor) + (th.ceil != th.floor ? t.count(th.ceil) : 0)) /
                                        static_cast<double>(t.total);
                    err << "n=" << t.set.size() << " window {" << th.floor << "," << th.ceil << "} mass " << mass << '\n';
                }

                const auto name = golden_file(a->family);
                const auto body = read_file(std::filesystem::path(a->golden) / name);
                verify_checksum(a->golden, name, body);
                const auto golden = parse_golden(body);
                int mismatches = 0;
                for (const auto& t : tables) {
                    const auto n = t.set.size();
                    const std::vector<std::uint64_t> got(t.counts.begin() + 1, t.counts.end());
                    const auto it = golden.find(n);
                    if (it == golden.end() || it->second != got) {
                        ++mismatches;
                        err << "row " << n << " differs from " << name << '\n';
                    }
                }
                if (mismatches) throw InternalError(std::to_string(mismatches) + " row(s) differ from the golden table");
                err << "all " << tables.size() << " rows match " << name << '\n';
                return Ok;
            };
        });
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Arithmetic progressions in orderings of additive sets", "apseq"};
    app.set_version_flag("--version", APSEQ_TOOL_VERSION);
    app.require_subcommand(1);
    Dispatcher d{out, err, Limits{}, {}};
    d.add_count(app);
    d.add_las(app);
    d.add_enumerate(app);
    d.add_predict(app);
    d.add_simulate(app);
    d.add_nonabelian(app);
    d.add_tables(app);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        return d.action ? d.action() : Usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return Usage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return Budget;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return Internal;
    }
}

}  // namespace apseq::cli
