#include "apseq/enumeration.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "apseq/error.hpp"
#include "checked.hpp"

namespace apseq {

namespace {

constexpr std::uint8_t kNone = 0xFF;

// Incremental L over a depth-first walk of all orderings. Placing x last
// extends, for each step r, the in-order run ending at x - r when x - r is
// already placed; the running maximum at a leaf is L of that ordering.
class Kernel {
public:
    explicit Kernel(const AdditiveSetSpec& set) : n_(static_cast<int>(set.size())) {
        const int d = set.dim();
        std::vector<std::int64_t> lo(d), hi(d), step(d);
        for (int i = 0; i < d; ++i) {
            const std::int64_t r = set.is_group() ? set.factors()[i] : set.n();
            lo[i] = set.is_group() ? 0 : -(r - 1);
            hi[i] = r - 1;
        }
        step = lo;
        while (true) {
            bool zero = true;
            for (auto c : step) zero = zero && c == 0;
            if (!zero) {
                Element back(step);
                for (auto& c : back.coords) c = -c;
                for (auto p : translation_table(set, back)) pred_.push_back(p < 0 ? kNone : static_cast<std::uint8_t>(p));
            }
            int i = d - 1;
            for (; i >= 0; --i) {
                if (++step[i] <= hi[i]) break;
                step[i] = lo[i];
            }
            if (i < 0) break;
        }
        steps_ = static_cast<int>(pred_.size()) / n_;
        len_.assign(pred_.size(), 0);
        tally_.assign(n_ + 1, 0);
    }

    std::vector<std::uint64_t> run(const std::vector<std::uint8_t>& prefix) {
        std::fill(tally_.begin(), tally_.end(), 0);
        placed_ = 0;
        // every leaf holds at least one element
        std::uint8_t best = 1;
        for (auto x : prefix) {
            best = place(x, best);
            placed_ |= 1u << x;
        }
        dfs(static_cast<int>(prefix.size()), best);
        return tally_;
    }

private:
    std::uint8_t place(int x, std::uint8_t best) {
        for (int s = 0; s < steps_; ++s) {
            const std::size_t row = static_cast<std::size_t>(s) * n_;
            const std::uint8_t p = pred_[row + x];
            const std::uint8_t l = (p != kNone && ((placed_ >> p) & 1u)) ? len_[row + p] + 1 : 1;
            len_[row + x] = l;
            if (l > best) best = l;
        }
        return best;
    }

    void dfs(int depth, std::uint8_t best) {
        if (depth == n_) {
            ++tally_[best];
            return;
        }
        for (int x = 0; x < n_; ++x) {
            if ((placed_ >> x) & 1u) continue;
            const std::uint8_t m = place(x, best);
            placed_ |= 1u << x;
            dfs(depth + 1, m);
            placed_ &= ~(1u << x);
        }
    }

    int n_;
    int steps_ = 0;
    std::vector<std::uint8_t> pred_;  // pred_[s*n + x] = index of x - r_s
    std::vector<std::uint8_t> len_;
    std::vector<std::uint64_t> tally_;
    std::uint32_t placed_ = 0;
};

struct Task {
    std::vector<std::uint8_t> prefix;
    std::uint64_t weight = 1;
};

// Each weighted prefix stands for `weight` prefixes that an L-preserving
// bijection of orderings carries onto it.
std::vector<Task> symmetric_tasks(const AdditiveSetSpec& set) {
    const auto n = set.size();
    if (n == 1) return {Task{}};
    std::vector<Task> tasks;
    switch (set.family()) {
        case Family::Cyclic:
            // Translate sigma(1) to 0, then a unit u maps sigma(2) = y to
            // gcd(y, n); phi(n/g) residues share gcd g.
            for (auto g : divisors(n)) {
                if (g == n) break;
                tasks.push_back({{0, static_cast<std::uint8_t>(g)}, n * totient(n / g)});
            }
            break;
        case Family::IntervalBox:
            // x -> (n+1) - x reverses canonical indices.
            for (std::uint64_t a = 0; a <= n - 1 - a; ++a) {
                tasks.push_back({{static_cast<std::uint8_t>(a)}, a == n - 1 - a ? 1u : 2u});
            }
            break;
        case Family::Abelian:
        case Family::ElementaryP: tasks.push_back({{0}, n}); break;
    }
    return tasks;
}

std::vector<Task> split_tasks(const std::vector<Task>& tasks, std::uint64_t n, std::size_t depth) {
    std::vector<Task> out;
    for (const auto& t : tasks) {
        if (t.prefix.size() >= depth || t.prefix.size() >= n) {
            out.push_back(t);
            continue;
        }
        for (std::uint64_t x = 0; x < n; ++x) {
            if (std::find(t.prefix.begin(), t.prefix.end(), x) != t.prefix.end()) continue;
            Task c = t;
            c.prefix.push_back(static_cast<std::uint8_t>(x));
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::uint64_t factorial(std::uint64_t n) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f = detail::mul_checked(f, i, "factorial");
    return f;
}

std::string checksum_input(const std::string& spec, const std::vector<std::uint64_t>& counts,
                           const std::string& version) {
    std::ostringstream os;
    os << spec << '|';
    for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "," : "") << counts[i];
    os << '|' << version;
    return os.str();
}

}  // namespace

DistributionTable distribution(const AdditiveSetSpec& set, const EnumerationOptions& options) {
    const auto n = set.size();
    const auto cap = options.parallel > 0 ? options.limits.enumeration_parallel_max : options.limits.enumeration_max;
    if (n > cap) {
        throw BudgetExceeded("exhaustive enumeration is capped at |A| <= " + std::to_string(cap) +
                             (options.parallel > 0 ? "" : " (raise with parallel mode)"));
    }

    std::vector<Task> tasks = options.symmetry ? symmetric_tasks(set) : std::vector<Task>{Task{}};
    if (options.parallel > 0) tasks = split_tasks(split_tasks(tasks, n, 2), n, 2);

    std::vector<std::vector<std::uint64_t>> partial(tasks.size());
    if (options.parallel == 0) {
        Kernel kernel(set);
        for (std::size_t i = 0; i < tasks.size(); ++i) partial[i] = kernel.run(tasks[i].prefix);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            Kernel kernel(set);
            for (std::size_t i = next++; i < tasks.size(); i = next++) partial[i] = kernel.run(tasks[i].prefix);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < options.parallel; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    DistributionTable table;
    table.set = set;
    table.counts.assign(n + 1, 0);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        for (std::size_t k = 0; k <= n; ++k) {
            table.counts[k] = detail::add_checked(table.counts[k], detail::mul_checked(partial[i][k], tasks[i].weight));
        }
    }
    table.total = factorial(n);
    std::uint64_t sum = 0;
    for (auto c : table.counts) sum += c;
    if (sum != table.total) {
        throw InternalError("distribution of " + set.to_string() + " sums to " + std::to_string(sum) + ", not |A|!");
    }
    return table;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const AdditiveSetSpec& set) {
    std::string key = set.to_string();
    for (auto& c : key) {
        if (c == ':' || c == ',' || c == '^') c = '_';
    }
    return cache_dir / (key + "_v" + APSEQ_TOOL_VERSION + ".json");
}

std::string cache_payload(const DistributionTable& table) {
    const std::string spec = table.set.to_string();
    nlohmann::json j;
    j["spec"] = spec;
    j["counts"] = table.counts;
    j["tool_version"] = APSEQ_TOOL_VERSION;
    j["checksum"] = hex64(fnv1a64(checksum_input(spec, table.counts, APSEQ_TOOL_VERSION)));
    return j.dump(2) + "\n";
}

std::optional<DistributionTable> parse_cache_payload(const std::string& text, const AdditiveSetSpec& set) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    try {
        const auto spec = j.at("spec").get<std::string>();
        const auto version = j.at("tool_version").get<std::string>();
        const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
        const auto checksum = j.at("checksum").get<std::string>();
        if (spec != set.to_string() || version != APSEQ_TOOL_VERSION) return std::nullopt;
        if (checksum != hex64(fnv1a64(checksum_input(spec, counts, version)))) return std::nullopt;
        if (counts.size() != set.size() + 1) return std::nullopt;
        DistributionTable t;
        t.set = set;
        t.counts = counts;
        t.total = factorial(set.size());
        std::uint64_t sum = 0;
        for (auto c : counts) sum += c;
        if (sum != t.total) return std::nullopt;
        return t;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

DistributionTable distribution_cached(const AdditiveSetSpec& set, const EnumerationOptions& options,
                                      const std::filesystem::path& cache_dir) {
    if (cache_dir.empty()) return distribution(set, options);
    const auto path = cache_path(cache_dir, set);
    if (std::ifstream in{path}) {
        std::stringstream buf;
        buf << in.rdbuf();
        if (auto hit = parse_cache_payload(buf.str(), set)) return *hit;
    }
    auto table = distribution(set, options);
    std::filesystem::create_directories(cache_dir);
    std::ofstream out(path);
    out << cache_payload(table);
    return table;
}

std::string distribution_csv(const std::vector<DistributionTable>& rows, std::size_t columns) {
    std::ostringstream os;
    os << 'n';
    for (std::size_t k = 1; k <= columns; ++k) os << ",k" << k;
    os << '\n';
    for (const auto& t : rows) {
        os << t.set.size();
        for (std::size_t k = 1; k <= columns; ++k) {
            os << ',';
            if (k <= t.set.size()) os << t.count(static_cast<std::int64_t>(k));
        }
        os << '\n';
    }
    return os.str();
}

std::uint64_t three_free_count(std::uint64_t n) {
    require(n >= 1, "three_free_count requires n >= 1");
    if (n == 1 || (n & (n - 1)) != 0) return 0;
    if (n > 64) throw BudgetExceeded("2^(n-1) overflows the 64-bit range for n > 64");
    return std::uint64_t{1} << (n - 1);
}

namespace {

bool three_free_blocks(const std::vector<std::uint32_t>& vals) {
    const std::size_t n = vals.size();
    if (n <= 2) return true;
    const std::size_t half = n / 2;
    const std::uint32_t first = vals[0] & 1u;
    std::vector<std::uint32_t> lead, tail;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t want = i < half ? first : 1u - first;
        if ((vals[i] & 1u) != want) return false;
        (i < half ? lead : tail).push_back((vals[i] - want) / 2);
    }
    return three_free_blocks(lead) && three_free_blocks(tail);
}

bool is_power_of_two_cyclic(const AdditiveSetSpec& set) {
    const auto n = set.size();
    return set.family() == Family::Cyclic && (n & (n - 1)) == 0;
}

}  // namespace

bool three_free_structure_check(const Ordering& ordering) {
    if (!is_power_of_two_cyclic(ordering.set())) {
        throw InvalidArgument("3-free structure check needs Z/2^m Z, got " + ordering.set().to_string());
    }
    return three_free_blocks({ordering.seq().begin(), ordering.seq().end()});
}

Ordering construct_three_free(int m, const Ordering& evens, const Ordering& odds, bool evens_first) {
    require(m >= 1 && m < 31, "construct_three_free requires 1 <= m < 31");
    const auto half = AdditiveSetSpec::cyclic(std::int64_t{1} << (m - 1));
    for (const auto* o : {&evens, &odds}) {
        require(o->set() == half, "construct_three_free inputs must be orderings of " + half.to_string());
        require(three_free_structure_check(*o), "construct_three_free inputs must be 3-free");
    }
    std::vector<std::uint32_t> even_block, odd_block;
    for (auto s : evens.seq()) even_block.push_back(2 * s);
    for (auto t : odds.seq()) odd_block.push_back(2 * t + 1);
    auto seq = evens_first ? even_block : odd_block;
    const auto& rest = evens_first ? odd_block : even_block;
    seq.insert(seq.end(), rest.begin(), rest.end());
    return Ordering(AdditiveSetSpec::cyclic(std::int64_t{1} << m), std::move(seq));
}

std::vector<Ordering> all_three_free(int m) {
    require(m >= 0 && m < 31, "all_three_free requires 0 <= m < 31");
    if (m == 0) return {Ordering::identity(AdditiveSetSpec::cyclic(1))};
    const auto smaller = all_three_free(m - 1);
    std::vector<Ordering> out;
    out.reserve(2 * smaller.size() * smaller.size());
    for (bool evens_first : {true, false}) {
        for (const auto& s : smaller) {
            for (const auto& t : smaller) out.push_back(construct_three_free(m, s, t, evens_first));
        }
    }
    return out;
}

}  // namespace apseq
