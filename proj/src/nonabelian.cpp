#include "apseq/nonabelian.hpp"

#include <cctype>
#include <charconv>

namespace apseq {

namespace {

std::int64_t wrap(std::int64_t a, std::int64_t n) {
    a %= n;
    return a < 0 ? a + n : a;
}

}  // namespace

DihedralElement mul(const DihedralElement& x, const DihedralElement& y) {
    require(same_group(x, y), "cannot multiply elements of D_" + std::to_string(x.n) + " and D_" + std::to_string(y.n));
    // r^a s^f r^b s^g = r^(a + (-1)^f b) s^(f + g)
    return {x.n, wrap(x.rotation + (x.flip ? -y.rotation : y.rotation), x.n), x.flip ^ y.flip};
}

DihedralElement inverse(const DihedralElement& x) {
    return x.flip ? x : DihedralElement{x.n, wrap(-x.rotation, x.n), 0};
}

DihedralElement identity_like(const DihedralElement& x) { return {x.n, 0, 0}; }

bool same_group(const DihedralElement& x, const DihedralElement& y) { return x.n == y.n; }

std::string to_string(const DihedralElement& x) {
    return "r^" + std::to_string(x.rotation) + (x.flip ? " s" : "");
}

std::vector<DihedralElement> dihedral_elements(std::int64_t n) {
    require(n >= 1, "D_n requires n >= 1");
    std::vector<DihedralElement> out;
    for (int f = 0; f < 2; ++f) {
        for (std::int64_t a = 0; a < n; ++a) out.push_back({n, a, f});
    }
    return out;
}

std::size_t dihedral_index(const DihedralElement& x) {
    return static_cast<std::size_t>(x.flip * x.n + x.rotation);
}

FreeWord::FreeWord(std::vector<Letter> letters) {
    for (const auto& l : letters) {
        require(l.first == 1 || l.first == 2, "free word generators are 1 (a) and 2 (b)");
        require(l.second == 1 || l.second == -1, "free word letters have exponent +1 or -1");
        if (!letters_.empty() && letters_.back().first == l.first && letters_.back().second == -l.second) {
            letters_.pop_back();
        } else {
            letters_.push_back(l);
        }
    }
}

FreeWord FreeWord::generator(int g, int exponent) {
    std::vector<Letter> letters;
    const int sign = exponent < 0 ? -1 : 1;
    for (int i = 0; i < std::abs(exponent); ++i) letters.emplace_back(g, sign);
    return FreeWord(std::move(letters));
}

FreeWord FreeWord::parse(std::string_view text) {
    std::vector<Letter> letters;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == 'e') {
            ++i;
            continue;
        }
        require(c == 'a' || c == 'b', "unexpected '" + std::string(1, c) + "' in free word '" + std::string(text) + "'");
        const int g = c == 'a' ? 1 : 2;
        ++i;
        int exponent = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            const char* first = text.data() + i;
            const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), exponent);
            require(ec == std::errc() && ptr != first, "bad exponent in free word '" + std::string(text) + "'");
            i += static_cast<std::size_t>(ptr - first);
        }
        const int sign = exponent < 0 ? -1 : 1;
        for (int t = 0; t < std::abs(exponent); ++t) letters.emplace_back(g, sign);
    }
    return FreeWord(std::move(letters));
}

FreeWord mul(const FreeWord& x, const FreeWord& y) {
    auto letters = x.letters();
    letters.insert(letters.end(), y.letters().begin(), y.letters().end());
    return FreeWord(std::move(letters));
}

FreeWord inverse(const FreeWord& x) {
    std::vector<FreeWord::Letter> letters;
    for (auto it = x.letters().rbegin(); it != x.letters().rend(); ++it) letters.emplace_back(it->first, -it->second);
    return FreeWord(std::move(letters));
}

FreeWord identity_like(const FreeWord&) { return FreeWord(); }

bool same_group(const FreeWord&, const FreeWord&) { return true; }

std::string to_string(const FreeWord& x) {
    if (x.length() == 0) return "e";
    std::string out;
    const auto& ls = x.letters();
    for (std::size_t i = 0; i < ls.size();) {
        std::size_t j = i;
        while (j < ls.size() && ls[j] == ls[i]) ++j;
        const auto run = static_cast<int>(j - i) * ls[i].second;
        out += ls[i].first == 1 ? 'a' : 'b';
        if (run != 1) out += "^" + std::to_string(run);
        i = j;
    }
    return out;
}

CyclicMul mul(const CyclicMul& x, const CyclicMul& y) {
    require(same_group(x, y), "cannot multiply elements of Z/" + std::to_string(x.n) + " and Z/" + std::to_string(y.n));
    return {x.n, wrap(x.value + y.value, x.n)};
}

CyclicMul inverse(const CyclicMul& x) { return {x.n, wrap(-x.value, x.n)}; }
CyclicMul identity_like(const CyclicMul& x) { return {x.n, 0}; }
bool same_group(const CyclicMul& x, const CyclicMul& y) { return x.n == y.n; }
std::string to_string(const CyclicMul& x) { return std::to_string(x.value) + " mod " + std::to_string(x.n); }

namespace {

void check_dihedral_count(std::int64_t n, std::int64_t k) {
    require(n >= 1, "D_n requires n >= 1");
    if (2 * n > 200) throw BudgetExceeded("dihedral progression counts are capped at order 2n <= 200");
    require(k >= 2 && k <= 2 * n, "k must satisfy 2 <= k <= 2n");
}

template <class Next>
std::uint64_t count_injective(std::int64_t n, std::int64_t k, Next next) {
    check_dihedral_count(n, k);
    const auto elems = dihedral_elements(n);
    const auto e = identity_like(elems[0]);
    std::uint64_t count = 0;
    std::vector<char> seen(elems.size());
    for (const auto& a : elems) {
        for (const auto& r : elems) {
            if (r == e) continue;
            std::fill(seen.begin(), seen.end(), 0);
            auto term = a;
            bool injective = true;
            for (std::int64_t i = 0; i < k && injective; ++i) {
                auto& s = seen[dihedral_index(term)];
                injective = !s;
                s = 1;
                term = next(term, r);
            }
            count += injective;
        }
    }
    return count;
}

}  // namespace

std::uint64_t left_ap_count(std::int64_t n, std::int64_t k) {
    return count_injective(n, k, [](const DihedralElement& t, const DihedralElement& r) { return mul(r, t); });
}

std::uint64_t right_ap_count(std::int64_t n, std::int64_t k) {
    return count_injective(n, k, [](const DihedralElement& t, const DihedralElement& r) { return mul(t, r); });
}

bool inversion_bijection_on_progressions(std::int64_t n, std::int64_t k) {
    check_dihedral_count(n, k);
    const auto elems = dihedral_elements(n);
    const auto e = identity_like(elems[0]);
    for (const auto& a : elems) {
        for (const auto& r : elems) {
            if (r == e) continue;
            std::vector<DihedralElement> left{a}, right{a};
            for (std::int64_t i = 1; i < k; ++i) {
                left.push_back(mul(r, left.back()));
                right.push_back(mul(right.back(), r));
            }
            const auto li = invert_sequence<DihedralElement>(left);
            const auto ri = invert_sequence<DihedralElement>(right);
            if (!is_right_ap<DihedralElement>(li) || !is_left_ap<DihedralElement>(ri)) return false;
        }
    }
    return true;
}

bool inversion_bijection_exhaustive(std::int64_t n, std::int64_t max_len) {
    require(max_len >= 2, "max_len must be at least 2");
    const auto elems = dihedral_elements(n);
    const auto g = elems.size();
    std::vector<std::size_t> digits;
    std::vector<DihedralElement> seq;
    for (std::int64_t len = 2; len <= max_len; ++len) {
        digits.assign(len, 0);
        while (true) {
            seq.clear();
            for (auto d : digits) seq.push_back(elems[d]);
            if (is_left_ap<DihedralElement>(seq) != is_right_ap<DihedralElement>(invert_sequence<DihedralElement>(seq))) {
                return false;
            }
            std::int64_t i = len - 1;
            for (; i >= 0; --i) {
                if (++digits[i] < g) break;
                digits[i] = 0;
            }
            if (i < 0) break;
        }
    }
    return true;
}

}  // namespace apseq
