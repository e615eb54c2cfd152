#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ddfb {

// Fixed-universe set of corpus positions 0..n-1.
class IdSet {
public:
    IdSet() = default;
    explicit IdSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static IdSet full(std::size_t universe) {
        IdSet s(universe);
        for (std::size_t i = 0; i < universe; ++i) s.insert(i);
        return s;
    }

    std::size_t universe() const { return universe_; }
    void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const { return count() == 0; }

    std::size_t intersection_count(const IdSet& o) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return n;
    }
    std::size_t union_count(const IdSet& o) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) n += static_cast<std::size_t>(std::popcount(words_[i] | o.words_[i]));
        return n;
    }

    IdSet operator&(const IdSet& o) const {
        IdSet r(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }
    IdSet operator|(const IdSet& o) const {
        IdSet r(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
        return r;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < universe_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(const IdSet& a, const IdSet& b) { return a.universe_ == b.universe_ && a.words_ == b.words_; }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace ddfb
