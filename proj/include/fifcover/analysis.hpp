#pragma once

#include "fifcover/error.hpp"
#include "fifcover/geometry.hpp"
#include "fifcover/ifs_model.hpp"
#include "fifcover/parallel.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fifcover {

/// Default upper bound on n^m composed maps.
inline constexpr std::uint64_t kDefaultMapCap = 10'000'000;

/// Letters k_1..k_m, 1-based, naming f_{k_1} o ... o f_{k_m}.
struct Word {
    std::vector<std::uint32_t> letters;

    std::size_t depth() const noexcept { return letters.size(); }
    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(letters[i]);
        }
        return out;
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;
};

using FixedPoint = Point;

/// n^m, or DepthCapExceeded when it exceeds cap (or overflows).
inline std::uint64_t word_count(std::size_t n, std::size_t m, std::uint64_t cap = kDefaultMapCap) {
    if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 maps");
    if (m < 1) throw Error(ErrorCode::DepthCapExceeded, "depth must be at least 1");
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (count > cap / n) {
            throw Error(ErrorCode::DepthCapExceeded,
                        std::to_string(n) + "^" + std::to_string(m) + " maps exceeds the cap of " +
                            std::to_string(cap));
        }
        count *= n;
    }
    return count;
}

/// The word at position `index` of the lexicographic enumeration.
inline Word word_at(std::uint64_t index, std::size_t n, std::size_t m) {
    Word w;
    w.letters.assign(m, 1);
    for (std::size_t i = m; i-- > 0;) {
        w.letters[i] = static_cast<std::uint32_t>(index % n) + 1;
        index /= n;
    }
    return w;
}

inline std::vector<Word> enumerate_words(std::size_t n, std::size_t m,
                                         std::uint64_t cap = kDefaultMapCap) {
    const std::uint64_t count = word_count(n, m, cap);
    std::vector<Word> words;
    words.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) words.push_back(word_at(i, n, m));
    return words;
}

/// Unique fixed point (b/(1-a), b*c/((1-a)(1-d)) + e/(1-d)).
inline FixedPoint fixed_point(const AffineMap& f) {
    if (!(f.a < 1.0) || !(f.d < 1.0)) {
        throw Error(ErrorCode::DegenerateMap, "fixed point needs a < 1 and d < 1");
    }
    const double one_minus_a = 1.0 - f.a;
    const double one_minus_d = 1.0 - f.d;
    return {f.b / one_minus_a, f.b * f.c / (one_minus_a * one_minus_d) + f.e / one_minus_d};
}

/// Exact Lipschitz constant of f under the weighted metric: max(d, a + theta*|c|).
inline double lipschitz_constant(const AffineMap& f, double theta) noexcept {
    return std::max(f.d, f.a + theta * std::abs(f.c));
}

/// outer o inner, in the coefficient form used by the composition recursion.
inline AffineMap compose(const AffineMap& outer, const AffineMap& inner) noexcept {
    return {outer.a * inner.a,
            outer.a * inner.b + outer.b,
            outer.c * inner.a + outer.d * inner.c,
            outer.d * inner.d,
            outer.c * inner.b + outer.d * inner.e + outer.e};
}

/// Coefficients of f_{k_1} o ... o f_{k_m}, folded from the right.
inline AffineMap compose_word(const FifSystem& system, const Word& word) {
    if (word.letters.empty()) throw Error(ErrorCode::LetterOutOfRange, "empty word");
    const std::size_t n = system.map_count();
    for (std::uint32_t k : word.letters) {
        if (k < 1 || k > n) {
            throw Error(ErrorCode::LetterOutOfRange,
                        "letter " + std::to_string(k) + " not in 1.." + std::to_string(n));
        }
    }
    AffineMap acc = system.maps[word.letters.back() - 1];
    for (std::size_t i = word.letters.size() - 1; i-- > 0;) {
        acc = compose(system.maps[word.letters[i] - 1], acc);
    }
    return acc;
}

/// All n^m composed maps in lexicographic word order.
///
/// Level j is built from level j-1 as f_k o (level j-1 map), which performs
/// exactly the floating-point operations of compose_word() for every word,
/// so results are bit-identical to the per-word fold.
inline std::vector<AffineMap> composed_maps(const FifSystem& system, std::size_t depth,
                                            std::uint64_t cap = kDefaultMapCap,
                                            Parallelism par = {}) {
    const std::size_t n = system.map_count();
    word_count(n, depth, cap);
    std::vector<AffineMap> level = system.maps;
    for (std::size_t j = 2; j <= depth; ++j) {
        const std::size_t prev = level.size();
        std::vector<AffineMap> next(prev * n);
        parallel_for(next.size(), par, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                next[i] = compose(system.maps[i / prev], level[i % prev]);
            }
        });
        level = std::move(next);
    }
    return level;
}

} // namespace fifcover
