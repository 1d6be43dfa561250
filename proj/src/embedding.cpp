#include "fusible/embedding.hpp"

#include <json.hpp>

#include <algorithm>

#include "fusible/generator.hpp"

namespace fusible {

std::optional<size_t> Embedding::index_of(const StarTerm& t) const {
    auto it = by_text_.find(t.str());
    if (it == by_text_.end())
        return std::nullopt;
    return it->second;
}

const Rational& Embedding::image_of(const StarTerm& t) const {
    auto i = index_of(t);
    if (!i)
        throw DomainError("term not present in the embedding: " + t.str());
    return images[*i];
}

std::optional<size_t> Embedding::index_of_image(const Rational& v) const {
    auto it = by_image_.find(v);
    if (it == by_image_.end())
        return std::nullopt;
    return it->second;
}

std::string Embedding::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    nlohmann::ordered_json es = nlohmann::ordered_json::array();
    for (size_t i = 0; i < terms.size(); ++i) {
        ts.push_back(terms[i].str());
        es.push_back(images[i].str());
    }
    j["terms"] = ts;
    j["images"] = es;
    return j.dump();
}

Embedding build_embedding(unsigned n, size_t term_count) {
    if (term_count < 1)
        throw DomainError("embedding needs at least one term");
    Embedding emb;
    emb.n = n;
    emb.terms = star_enumerate_by_size(n, term_count);
    emb.images.reserve(emb.terms.size());
    emb.images.push_back(Rational(0)); // e(a_0) = 0

    for (size_t next = 1; next < emb.terms.size(); ++next) {
        // largest earlier term below terms[next]; position 0 always qualifies
        size_t k = 0;
        for (size_t j = 1; j < next; ++j)
            if (star_less(emb.terms[j], emb.terms[next]) &&
                star_less(emb.terms[k], emb.terms[j]))
                k = j;
        size_t i = next - 1;
        emb.images.push_back(emb.images[k] + rational_pow(3, -static_cast<long long>(k)) +
                             rational_pow(3, -static_cast<long long>(i)));
    }

    for (size_t i = 0; i < emb.terms.size(); ++i) {
        emb.by_text_.emplace(emb.terms[i].str(), i);
        emb.by_image_.emplace(emb.images[i], i);
    }

    // Re-verify the construction invariants on the whole prefix.
    const size_t K = emb.terms.size();
    for (size_t i = 0; i < K; ++i)
        for (size_t j = i + 1; j < K; ++j) {
            bool term_less = star_less(emb.terms[i], emb.terms[j]);
            bool image_less = emb.images[i] < emb.images[j];
            if (term_less != image_less)
                throw Error("embedding is not order preserving at positions " +
                            std::to_string(i) + "," + std::to_string(j));
        }
    // neighbor gap: for neighbors a_i < a_j within the first m+1 terms,
    // e(a_j) - e(a_i) >= 3^-i + 2*3^-m + 3^-j
    std::vector<size_t> sorted;
    for (size_t m = 0; m < K; ++m) {
        auto pos = std::upper_bound(sorted.begin(), sorted.end(), m,
                                    [&](size_t a, size_t b) {
                                        return star_less(emb.terms[a], emb.terms[b]);
                                    });
        sorted.insert(pos, m);
        Rational two_3m = Rational(2) * rational_pow(3, -static_cast<long long>(m));
        for (size_t s = 0; s + 1 < sorted.size(); ++s) {
            size_t i = sorted[s], j = sorted[s + 1];
            Rational gap = emb.images[j] - emb.images[i];
            if (gap < rational_pow(3, -static_cast<long long>(i)) + two_3m +
                          rational_pow(3, -static_cast<long long>(j)))
                throw Error("embedding neighbor gap violated at prefix " + std::to_string(m));
        }
    }
    // isolation: no other image within 3^-i of e(a_i)
    for (size_t i = 0; i < K; ++i) {
        Rational radius = rational_pow(3, -static_cast<long long>(i));
        for (size_t j = 0; j < K; ++j)
            if (j != i && abs(emb.images[j] - emb.images[i]) <= radius)
                throw Error("embedding isolation violated at position " + std::to_string(i));
    }
    return emb;
}

GridFunction::GridFunction(unsigned n, std::vector<Rational> grid,
                           std::map<std::vector<Rational>, Rational> table)
    : n_(n), grid_(std::move(grid)), table_(std::move(table)) {
    if (n_ == 0)
        throw DomainError("grid function needs arity >= 1");
    std::sort(grid_.begin(), grid_.end());
    grid_.erase(std::unique(grid_.begin(), grid_.end()), grid_.end());
    if (grid_.empty())
        throw DomainError("grid function needs a nonempty grid");
    bool first = true;
    for (const auto& [tuple, value] : table_) {
        if (tuple.size() != n_)
            throw DomainError("table tuple arity mismatch");
        for (const auto& x : tuple)
            if (!std::binary_search(grid_.begin(), grid_.end(), x))
                throw DomainError("table tuple coordinate not on the grid");
        if (first || value > table_max_)
            table_max_ = value;
        first = false;
    }
    // monotonicity across comparable tabulated tuples
    for (auto it = table_.begin(); it != table_.end(); ++it)
        for (auto jt = std::next(it); jt != table_.end(); ++jt) {
            bool le = true, ge = true;
            for (size_t i = 0; i < n_; ++i) {
                if (it->first[i] > jt->first[i])
                    le = false;
                if (it->first[i] < jt->first[i])
                    ge = false;
            }
            if ((le && it->second > jt->second) || (ge && it->second < jt->second))
                throw DomainError("grid table is not monotone");
        }
}

const Rational& GridFunction::at(const std::vector<Rational>& tuple) const {
    auto it = table_.find(tuple);
    if (it == table_.end())
        throw DomainError("tuple not tabulated");
    return it->second;
}

Rational GridFunction::completed(std::span<const Rational> point) const {
    if (point.size() != n_)
        throw DomainError("point arity mismatch");
    if (table_.empty())
        throw DomainError("empty grid table");
    bool found = false;
    Rational best;
    for (const auto& [tuple, value] : table_) {
        bool dominates = true;
        for (size_t i = 0; i < n_; ++i)
            if (tuple[i] < point[i]) {
                dominates = false;
                break;
            }
        if (!dominates)
            continue;
        if (!found || value < best) {
            best = value;
            found = true;
        }
    }
    return found ? best : table_max_;
}

GridFunction star_function_on_grid(const Embedding& emb) {
    std::map<std::vector<Rational>, Rational> table;
    for (size_t i = 0; i < emb.terms.size(); ++i) {
        const StarTerm& t = emb.terms[i];
        if (t.is_zero())
            continue;
        std::vector<Rational> tuple;
        tuple.reserve(t.arity());
        for (const auto& c : t.children())
            tuple.push_back(emb.image_of(c)); // children precede t in size order
        table.emplace(std::move(tuple), emb.images[i]);
    }
    return GridFunction(emb.n, emb.images, std::move(table));
}

Rational extend_eval(const GridFunction& f, std::span<const Rational> point) {
    const unsigned n = f.arity();
    if (point.size() != n)
        throw DomainError("point arity mismatch");
    const auto& grid = f.grid();
    std::vector<Rational> lo(n), hi(n), w1(n);
    for (unsigned i = 0; i < n; ++i) {
        if (point[i] < grid.front() || point[i] > grid.back())
            throw DomainError("coordinate " + std::to_string(i) + " outside the grid hull");
        auto up = std::lower_bound(grid.begin(), grid.end(), point[i]);
        hi[i] = *up;
        if (*up == point[i]) {
            lo[i] = *up;
            w1[i] = Rational(1, 2); // grid point: both weights 1/2
        } else {
            lo[i] = *std::prev(up);
            w1[i] = (point[i] - lo[i]) / (hi[i] - lo[i]);
        }
    }
    Rational acc(0);
    std::vector<Rational> corner(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        Rational weight(1);
        for (unsigned i = 0; i < n; ++i) {
            bool up = mask & (1u << i);
            weight *= up ? w1[i] : (Rational(1) - w1[i]);
            corner[i] = up ? hi[i] : lo[i];
        }
        if (weight.is_zero())
            continue;
        acc += weight * f.completed(corner);
    }
    return acc;
}

std::string GridDemoReport::to_json() const {
    nlohmann::ordered_json j;
    j["terms"] = term_count;
    j["generated"] = generated;
    j["order_isomorphic"] = order_isomorphic;
    nlohmann::ordered_json miss = nlohmann::ordered_json::array();
    for (const auto& m : missing)
        miss.push_back(m);
    j["missing"] = miss;
    j["budget_complete"] = budget_complete;
    j["subset_of_images"] = subset_of_images;
    j["skipped_applications"] = skipped_applications;
    j["n"] = n;
    j["budget"] = budget;
    return j.dump();
}

GridDemoReport grid_generation_demo(unsigned n, size_t term_count, unsigned budget) {
    GridDemoReport rep;
    rep.n = n;
    rep.term_count = term_count;
    rep.budget = budget;

    Embedding emb = build_embedding(n, term_count);
    GridFunction gf = star_function_on_grid(emb);

    ValueFunction vf;
    vf.arity = n;
    vf.name = "g";
    vf.eval = [&gf](std::span<const Rational> args) -> std::optional<Rational> {
        std::vector<Rational> tuple(args.begin(), args.end());
        if (!gf.is_tabulated(tuple))
            return std::nullopt; // image term not enumerated: skip and flag
        return gf.at(tuple);
    };

    GenerateOptions opt;
    opt.budget = budget;
    Fragment frag = generate_with({vf}, {Rational(0)}, opt, &rep.skipped_applications);
    rep.generated = frag.values.size();

    rep.subset_of_images = true;
    std::vector<size_t> positions; // embedding indices of generated values, value-ascending
    for (const auto& v : frag.values) {
        auto idx = emb.index_of_image(v);
        if (!idx) {
            rep.subset_of_images = false;
            continue;
        }
        positions.push_back(*idx);
    }

    // Generated values ascending must correspond to star-ascending terms.
    rep.order_isomorphic = rep.subset_of_images;
    for (size_t i = 0; i + 1 < positions.size(); ++i)
        if (!star_less(emb.terms[positions[i]], emb.terms[positions[i + 1]]))
            rep.order_isomorphic = false;

    // Coverage: list what was not reached, and check that everything
    // buildable within the round budget was.
    rep.budget_complete = true;
    for (size_t i = 0; i < emb.terms.size(); ++i) {
        const StarTerm& t = emb.terms[i];
        if (frag.contains(emb.images[i]))
            continue;
        rep.missing.push_back(t.str());
        if (t.depth() <= budget)
            rep.budget_complete = false;
    }
    return rep;
}

} // namespace fusible
