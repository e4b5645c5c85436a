#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>

namespace klim {

using Rational = mpq_class;

/// Finite Q-linear combination of basis keys; zero coefficients are never stored.
template <class Key>
class Combination {
public:
    using Terms = std::map<Key, Rational>;

    Combination() = default;
    Combination(const Key& key, Rational coeff = 1) { add(key, std::move(coeff)); }

    void add(const Key& key, const Rational& coeff)
    {
        if (coeff == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(key, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Combination& operator+=(const Combination& other)
    {
        for (const auto& [k, c] : other.terms_)
            add(k, c);
        return *this;
    }

    Combination& operator-=(const Combination& other)
    {
        for (const auto& [k, c] : other.terms_)
            add(k, -c);
        return *this;
    }

    Combination& operator*=(const Rational& s)
    {
        if (s == 0)
            terms_.clear();
        else
            for (auto& [k, c] : terms_)
                c *= s;
        return *this;
    }

    friend Combination operator+(Combination a, const Combination& b) { return a += b; }
    friend Combination operator-(Combination a, const Combination& b) { return a -= b; }
    friend Combination operator*(const Rational& s, Combination a) { return a *= s; }
    friend bool operator==(const Combination& a, const Combination& b) { return a.terms_ == b.terms_; }

    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    const Terms& terms() const noexcept { return terms_; }
    auto begin() const noexcept { return terms_.begin(); }
    auto end() const noexcept { return terms_.end(); }

    Rational coefficient(const Key& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Applies a bilinear map on basis keys to a pair of combinations.
    template <class Other, class Fn>
    friend auto bilinear(const Combination& a, const Other& b, Fn&& fn)
    {
        decltype(fn(a.begin()->first, b.begin()->first)) out;
        for (const auto& [ka, ca] : a)
            for (const auto& [kb, cb] : b) {
                auto piece = fn(ka, kb);
                piece *= ca * cb;
                out += piece;
            }
        return out;
    }

private:
    Terms terms_;
};

/// "0", "+{..}", "-2{..}+{..}" style rendering; `name` turns a key into text.
template <class Key, class Name>
std::string render(const Combination<Key>& c, Name&& name)
{
    if (c.is_zero())
        return "0";
    std::string out;
    for (const auto& [k, coeff] : c) {
        Rational a = abs(coeff);
        out += coeff < 0 ? "-" : "+";
        if (a != 1)
            out += a.get_str() + "*";
        out += name(k);
    }
    return out;
}

} // namespace klim
