#include "apseq/groups.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "apseq/error.hpp"

namespace apseq {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::uint64_t checked_size(const std::vector<std::int64_t>& radices, const Limits& limits) {
    std::uint64_t size = 1;
    for (auto r : radices) {
        if (__builtin_mul_overflow(size, static_cast<std::uint64_t>(r), &size) ||
            size > limits.max_cardinality) {
            throw BudgetExceeded("set cardinality exceeds the configured cap of " +
                                 std::to_string(limits.max_cardinality));
        }
    }
    return size;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

void check_dim(const AdditiveSetSpec& set, const Element& x) {
    if (static_cast<int>(x.dim()) != set.dim()) {
        throw InvalidArgument("dimension mismatch: element " + to_string(x) + " for set " +
                              set.to_string());
    }
}

void check_group_element(const AdditiveSetSpec& set, const Element& x) {
    check_dim(set, x);
    if (!set.is_group()) return;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x.coords[i] < 0 || x.coords[i] >= set.factors()[i]) {
            throw InvalidArgument("element " + to_string(x) + " out of range for " + set.to_string());
        }
    }
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::IntervalBox: return "interval";
        case Family::Cyclic: return "cyclic";
        case Family::Abelian: return "abelian";
        case Family::ElementaryP: return "elementary";
    }
    return "?";
}

std::string to_string(const Element& x) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        if (i) os << ',';
        os << x.coords[i];
    }
    os << ')';
    return os.str();
}

AdditiveSetSpec AdditiveSetSpec::interval(std::int64_t n, int d, const Limits& limits) {
    require(n >= 1, "interval side n must be >= 1");
    require(d >= 1, "interval dimension d must be >= 1");
    AdditiveSetSpec s;
    s.family_ = Family::IntervalBox;
    s.side_ = n;
    s.dim_ = d;
    s.size_ = checked_size(std::vector<std::int64_t>(d, n), limits);
    return s;
}

AdditiveSetSpec AdditiveSetSpec::cyclic(std::int64_t n, const Limits& limits) {
    require(n >= 1, "cyclic modulus n must be >= 1");
    AdditiveSetSpec s;
    s.family_ = Family::Cyclic;
    s.side_ = n;
    s.dim_ = 1;
    s.factors_ = {n};
    s.size_ = checked_size(s.factors_, limits);
    return s;
}

AdditiveSetSpec AdditiveSetSpec::abelian(std::vector<std::int64_t> factors, const Limits& limits) {
    require(!factors.empty(), "abelian factor list must be nonempty");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        require(factors[i] >= 2, "abelian factors must be >= 2");
        if (i > 0) {
            require(factors[i] % factors[i - 1] == 0,
                    "abelian factors must form a divisibility chain n1 | n2 | ...");
        }
    }
    AdditiveSetSpec s;
    s.family_ = Family::Abelian;
    s.dim_ = static_cast<int>(factors.size());
    s.factors_ = std::move(factors);
    s.size_ = checked_size(s.factors_, limits);
    s.side_ = static_cast<std::int64_t>(s.size_);
    return s;
}

AdditiveSetSpec AdditiveSetSpec::elementary(std::int64_t p, int d, const Limits& limits) {
    require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), "elementary base p must be prime");
    require(d >= 1, "elementary dimension d must be >= 1");
    AdditiveSetSpec s;
    s.family_ = Family::ElementaryP;
    s.p_ = p;
    s.dim_ = d;
    s.factors_.assign(d, p);
    s.size_ = checked_size(s.factors_, limits);
    s.side_ = static_cast<std::int64_t>(s.size_);
    return s;
}

AdditiveSetSpec AdditiveSetSpec::parse(std::string_view text, const Limits& limits) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidArgument("set spec must look like family:params, got '" + std::string(text) + "'");
    }
    auto kind = text.substr(0, colon);
    auto body = text.substr(colon + 1);
    if (kind == "interval") {
        auto comma = body.find(',');
        if (comma == std::string_view::npos) return interval(parse_int(body, "n"), 1, limits);
        return interval(parse_int(body.substr(0, comma), "n"),
                        static_cast<int>(parse_int(body.substr(comma + 1), "d")), limits);
    }
    if (kind == "cyclic") return cyclic(parse_int(body, "n"), limits);
    if (kind == "elementary") {
        auto caret = body.find('^');
        if (caret == std::string_view::npos) return elementary(parse_int(body, "p"), 1, limits);
        return elementary(parse_int(body.substr(0, caret), "p"),
                          static_cast<int>(parse_int(body.substr(caret + 1), "d")), limits);
    }
    if (kind == "abelian") {
        std::vector<std::int64_t> factors;
        std::size_t start = 0;
        while (true) {
            auto x = body.find('x', start);
            factors.push_back(parse_int(body.substr(start, x - start), "factor"));
            if (x == std::string_view::npos) break;
            start = x + 1;
        }
        for (auto f : factors) require(f >= 2, "abelian factors must be >= 2");
        return abelian(normalize_invariant_factors(factors), limits);
    }
    throw InvalidArgument("unknown set family '" + std::string(kind) + "'");
}

std::int64_t AdditiveSetSpec::n() const { return side_; }

std::int64_t AdditiveSetSpec::exponent() const {
    require(is_group(), "exponent is defined only for group families");
    return factors_.back();
}

std::string AdditiveSetSpec::to_string() const {
    std::ostringstream os;
    switch (family_) {
        case Family::IntervalBox:
            os << "interval:" << side_;
            if (dim_ != 1) os << ',' << dim_;
            break;
        case Family::Cyclic: os << "cyclic:" << side_; break;
        case Family::Abelian:
            os << "abelian:";
            for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "x" : "") << factors_[i];
            break;
        case Family::ElementaryP: os << "elementary:" << p_ << '^' << dim_; break;
    }
    return os.str();
}

bool AdditiveSetSpec::contains(const Element& x) const {
    if (static_cast<int>(x.dim()) != dim_) return false;
    for (int i = 0; i < dim_; ++i) {
        auto c = x.coords[i];
        if (family_ == Family::IntervalBox) {
            if (c < 1 || c > side_) return false;
        } else if (c < 0 || c >= factors_[i]) {
            return false;
        }
    }
    return true;
}

Element add(const AdditiveSetSpec& set, const Element& x, const Element& y) {
    check_group_element(set, x);
    check_group_element(set, y);
    Element z(std::vector<std::int64_t>(x.dim()));
    for (std::size_t i = 0; i < x.dim(); ++i) {
        z.coords[i] = x.coords[i] + y.coords[i];
        if (set.is_group()) z.coords[i] = mod(z.coords[i], set.factors()[i]);
    }
    return z;
}

Element negate(const AdditiveSetSpec& set, const Element& x) { return scalar_mul(set, -1, x); }

Element subtract(const AdditiveSetSpec& set, const Element& x, const Element& y) {
    return add(set, x, negate(set, y));
}

Element scalar_mul(const AdditiveSetSpec& set, std::int64_t m, const Element& x) {
    check_group_element(set, x);
    Element z(std::vector<std::int64_t>(x.dim()));
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (set.is_group()) {
            auto f = set.factors()[i];
            z.coords[i] = static_cast<std::int64_t>(
                (static_cast<__int128>(mod(m, f)) * x.coords[i]) % f);
        } else {
            z.coords[i] = m * x.coords[i];
        }
    }
    return z;
}

std::uint64_t element_order(const AdditiveSetSpec& set, const Element& x) {
    if (!set.is_group()) {
        throw InvalidArgument("element order is infinite in the interval box's lattice");
    }
    check_group_element(set, x);
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        auto f = static_cast<std::uint64_t>(set.factors()[i]);
        order = std::lcm(order, f / std::gcd(static_cast<std::uint64_t>(x.coords[i]), f));
    }
    return order;
}

std::uint64_t canonical_index(const AdditiveSetSpec& set, const Element& x) {
    if (!set.contains(x)) {
        throw InvalidArgument("element " + to_string(x) + " is not a member of " + set.to_string());
    }
    std::uint64_t idx = 0;
    for (int i = 0; i < set.dim(); ++i) {
        if (set.is_group()) {
            idx = idx * static_cast<std::uint64_t>(set.factors()[i]) +
                  static_cast<std::uint64_t>(x.coords[i]);
        } else {
            idx = idx * static_cast<std::uint64_t>(set.n()) + static_cast<std::uint64_t>(x.coords[i] - 1);
        }
    }
    return idx;
}

Element element_at(const AdditiveSetSpec& set, std::uint64_t index) {
    if (index >= set.size()) {
        throw InvalidArgument("index " + std::to_string(index) + " out of range for " + set.to_string());
    }
    Element x(std::vector<std::int64_t>(set.dim()));
    for (int i = set.dim() - 1; i >= 0; --i) {
        auto radix = static_cast<std::uint64_t>(set.is_group() ? set.factors()[i] : set.n());
        auto digit = static_cast<std::int64_t>(index % radix);
        index /= radix;
        x.coords[i] = set.is_group() ? digit : digit + 1;
    }
    return x;
}

std::vector<std::int64_t> translation_table(const AdditiveSetSpec& set, const Element& delta) {
    check_dim(set, delta);
    const int d = set.dim();
    std::vector<std::int64_t> radix(d);
    std::vector<std::int64_t> shift(d);
    for (int i = 0; i < d; ++i) {
        radix[i] = set.is_group() ? set.factors()[i] : set.n();
        shift[i] = set.is_group() ? mod(delta.coords[i], radix[i]) : delta.coords[i];
    }
    // Odometer over zero-based digits in row-major order.
    std::vector<std::int64_t> digit(d, 0);
    std::vector<std::int64_t> table(set.size());
    for (std::uint64_t idx = 0; idx < set.size(); ++idx) {
        std::int64_t target = 0;
        bool inside = true;
        for (int i = 0; i < d; ++i) {
            std::int64_t c = digit[i] + shift[i];
            if (set.is_group()) {
                if (c >= radix[i]) c -= radix[i];
            } else if (c < 0 || c >= radix[i]) {
                inside = false;
                break;
            }
            target = target * radix[i] + c;
        }
        table[idx] = inside ? target : -1;
        for (int i = d - 1; i >= 0; --i) {
            if (++digit[i] < radix[i]) break;
            digit[i] = 0;
        }
    }
    return table;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t m) {
    require(m >= 1, "factorize requires m >= 1");
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t q = 2; q * q <= m; ++q) {
        if (m % q) continue;
        int e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        out.emplace_back(q, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    auto f = factorize(m);
    return f.size() == 1 && f[0].second == 1;
}

std::uint64_t totient(std::uint64_t m) {
    require(m >= 1, "totient requires m >= 1");
    std::uint64_t phi = m;
    for (auto [q, e] : factorize(m)) phi = phi / q * (q - 1);
    return phi;
}

int mobius(std::uint64_t m) {
    int sign = 1;
    for (auto [q, e] : factorize(m)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

std::vector<std::uint64_t> divisors(std::uint64_t m) {
    std::vector<std::uint64_t> out{1};
    for (auto [q, e] : factorize(m)) {
        const auto base = out.size();
        std::uint64_t pw = 1;
        for (int i = 0; i < e; ++i) {
            pw *= q;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pw);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> normalize_invariant_factors(const std::vector<std::int64_t>& factors) {
    require(!factors.empty(), "factor list must be nonempty");
    std::map<std::uint64_t, std::vector<std::uint64_t>> powers;  // prime -> prime powers
    for (auto f : factors) {
        require(f >= 2, "invariant factors must be >= 2");
        for (auto [q, e] : factorize(static_cast<std::uint64_t>(f))) {
            std::uint64_t pw = 1;
            for (int i = 0; i < e; ++i) pw *= q;
            powers[q].push_back(pw);
        }
    }
    std::size_t len = 0;
    for (auto& [q, pws] : powers) {
        std::sort(pws.begin(), pws.end(), std::greater<>());
        len = std::max(len, pws.size());
    }
    // chain[len-1] collects the largest power of every prime, and so on down.
    std::vector<std::int64_t> chain(len, 1);
    for (const auto& [q, pws] : powers) {
        for (std::size_t i = 0; i < pws.size(); ++i) chain[len - 1 - i] *= static_cast<std::int64_t>(pws[i]);
    }
    return chain;
}

}  // namespace apseq
