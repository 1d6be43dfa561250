#include "fusible/generator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>

namespace fusible {

namespace {

std::string application_text(const std::string& name,
                             const std::vector<MonotoneTerm>& children) {
    std::string out = "(" + name;
    for (const auto& c : children) {
        out += ' ';
        out += c.serialization();
    }
    out += ')';
    return out;
}

} // namespace

// Internal constructor access for the generation cores.
class TermBuilder {
public:
    static MonotoneTerm leaf(const Rational& v) {
        auto n = std::make_shared<MonotoneTerm::Node>();
        n->fn = -1;
        n->value = v;
        n->text = v.str();
        return MonotoneTerm(std::move(n));
    }

    static MonotoneTerm app(int fn_index, const std::string& name, Rational value,
                            std::vector<MonotoneTerm> children) {
        auto n = std::make_shared<MonotoneTerm::Node>();
        n->fn = fn_index;
        n->value = std::move(value);
        n->text = application_text(name, children);
        n->children = std::move(children);
        return MonotoneTerm(std::move(n));
    }
};

std::vector<ValueFunction> value_functions(const GeneratorSystem& sys) {
    std::vector<ValueFunction> out;
    const auto& fns = sys.functions();
    for (size_t i = 0; i < fns.size(); ++i) {
        const LinearFunction* g = &fns[i];
        ValueFunction vf;
        vf.arity = g->arity();
        vf.name = fns.size() == 1 ? "g" : "g" + std::to_string(i + 1);
        vf.eval = [g](std::span<const Rational> args) -> std::optional<Rational> {
            return g->eval(args);
        };
        vf.linear = g;
        out.push_back(std::move(vf));
    }
    return out;
}

MonotoneTerm MonotoneTerm::constant(const Rational& v) {
    return TermBuilder::leaf(v);
}

MonotoneTerm MonotoneTerm::apply_unvalidated(const GeneratorSystem& sys, size_t fn_index,
                                             std::vector<MonotoneTerm> children) {
    if (fn_index >= sys.functions().size())
        throw DomainError("function index out of range");
    const LinearFunction& g = sys.functions()[fn_index];
    if (children.size() != g.arity())
        throw DomainError("arity mismatch in term application");
    std::vector<Rational> args;
    args.reserve(children.size());
    for (const auto& c : children)
        args.push_back(c.value());
    Rational v = g.eval(args);
    std::string name = sys.functions().size() == 1 ? "g" : "g" + std::to_string(fn_index + 1);
    return TermBuilder::app(static_cast<int>(fn_index), name, std::move(v), std::move(children));
}

MonotoneTerm MonotoneTerm::apply(const GeneratorSystem& sys, size_t fn_index,
                                 std::vector<MonotoneTerm> children) {
    MonotoneTerm t = apply_unvalidated(sys, fn_index, std::move(children));
    for (const auto& c : t.children())
        if (!(t.value() > c.value()))
            throw DomainError("monotone-term violation: " + t.value().str() +
                              " does not exceed child " + c.value().str());
    return t;
}

namespace {

Rational eval_term_rec(const GeneratorSystem& sys, const MonotoneTerm& t, std::string& path) {
    if (t.is_constant())
        return t.value();
    size_t fi = static_cast<size_t>(t.function_index());
    if (fi >= sys.functions().size())
        throw DomainError("function index out of range at " + (path.empty() ? "/" : path));
    const LinearFunction& g = sys.functions()[fi];
    if (t.children().size() != g.arity())
        throw DomainError("arity mismatch at " + (path.empty() ? "/" : path));
    std::vector<Rational> args;
    args.reserve(t.children().size());
    for (size_t i = 0; i < t.children().size(); ++i) {
        size_t mark = path.size();
        path += "/" + std::to_string(i);
        args.push_back(eval_term_rec(sys, t.children()[i], path));
        path.resize(mark);
    }
    Rational v = g.eval(args);
    if (v != t.value())
        throw DomainError("cached value mismatch at " + (path.empty() ? "/" : path) + ": cached " +
                          t.value().str() + ", evaluates to " + v.str());
    for (size_t i = 0; i < args.size(); ++i)
        if (!(v > args[i]))
            throw DomainError("monotone-term violation at " + path + "/" + std::to_string(i) +
                              ": value " + v.str() + " does not exceed argument " + args[i].str());
    return v;
}

} // namespace

Rational eval_term(const GeneratorSystem& sys, const MonotoneTerm& t) {
    std::string path;
    return eval_term_rec(sys, t, path);
}

bool Fragment::contains(const Rational& v) const {
    return std::binary_search(values.begin(), values.end(), v);
}

std::optional<size_t> Fragment::index_of(const Rational& v) const {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || *it != v)
        return std::nullopt;
    return static_cast<size_t>(it - values.begin());
}

namespace {

struct KnownInfo {
    unsigned depth;
    MonotoneTerm witness;
};

// Enumerates argument tuples for one function over the sorted value pool,
// requiring at least one frontier component, and feeds candidates to sink.
class TupleScan {
public:
    TupleScan(const ValueFunction& fn, size_t fn_index,
              const std::vector<Rational>& vals, const std::vector<MonotoneTerm>& terms,
              const std::vector<size_t>& frontier_idx, const std::optional<Rational>& bound,
              WorkMeter& meter, size_t* skipped,
              std::map<Rational, MonotoneTerm>& sink)
        : fn_(fn), fn_index_(fn_index), vals_(vals), terms_(terms),
          frontier_idx_(frontier_idx), bound_(bound), meter_(meter), skipped_(skipped),
          sink_(sink) {
        if (fn_.linear && bound_) {
            // suffix_min_[i] = least possible contribution of arguments i..k-1
            const auto& a = fn_.linear->coefficients();
            suffix_min_.assign(a.size() + 1, Rational(0));
            if (!vals_.empty())
                for (size_t i = a.size(); i-- > 0;)
                    suffix_min_[i] = suffix_min_[i + 1] + a[i] * vals_.front();
        }
        args_.reserve(fn_.arity);
        arg_idx_.reserve(fn_.arity);
    }

    void run() {
        if (vals_.empty() && fn_.arity > 0)
            return;
        Rational partial = fn_.linear ? fn_.linear->constant() : Rational(0);
        rec(0, false, partial, Rational(0));
    }

private:
    void rec(size_t pos, bool has_frontier, const Rational& partial, const Rational& max_arg) {
        if (pos == fn_.arity) {
            emit(partial, max_arg);
            return;
        }
        bool last = pos + 1 == fn_.arity;
        const bool restrict_frontier = last && !has_frontier;
        const std::vector<size_t>* order = restrict_frontier ? &frontier_idx_ : nullptr;
        size_t count = restrict_frontier ? frontier_idx_.size() : vals_.size();
        for (size_t oi = 0; oi < count; ++oi) {
            size_t vi = order ? (*order)[oi] : oi;
            const Rational& v = vals_[vi];
            Rational next_partial = partial;
            if (fn_.linear) {
                next_partial += fn_.linear->coefficient(pos) * v;
                if (bound_ && !suffix_min_.empty() &&
                    next_partial + suffix_min_[pos + 1] > *bound_)
                    break; // values ascend, later choices only grow
            }
            arg_idx_.push_back(vi);
            args_.push_back(v);
            rec(pos + 1, has_frontier || is_frontier(vi), next_partial,
                pos == 0 ? v : max(max_arg, v));
            args_.pop_back();
            arg_idx_.pop_back();
        }
    }

    bool is_frontier(size_t vi) const {
        return std::binary_search(frontier_idx_.begin(), frontier_idx_.end(), vi);
    }

    void emit(const Rational& partial, const Rational& max_arg) {
        meter_.charge();
        Rational v;
        if (fn_.linear) {
            v = partial;
        } else {
            auto r = fn_.eval(args_);
            if (!r) {
                if (skipped_)
                    ++*skipped_;
                return;
            }
            v = *r;
        }
        if (fn_.arity > 0 && !(v > max_arg))
            return;
        if (bound_ && v > *bound_)
            return;
        std::vector<MonotoneTerm> children;
        children.reserve(arg_idx_.size());
        for (size_t vi : arg_idx_)
            children.push_back(terms_[vi]);
        MonotoneTerm t = TermBuilder::app(static_cast<int>(fn_index_), fn_.name, v,
                                          std::move(children));
        auto [it, inserted] = sink_.try_emplace(v, t);
        if (!inserted && t.serialization() < it->second.serialization())
            it->second = t;
    }

    const ValueFunction& fn_;
    size_t fn_index_;
    const std::vector<Rational>& vals_;
    const std::vector<MonotoneTerm>& terms_;
    const std::vector<size_t>& frontier_idx_;
    const std::optional<Rational>& bound_;
    WorkMeter& meter_;
    size_t* skipped_;
    std::map<Rational, MonotoneTerm>& sink_;
    std::vector<Rational> suffix_min_;
    std::vector<Rational> args_;
    std::vector<size_t> arg_idx_;
};

} // namespace

Fragment generate_with(const std::vector<ValueFunction>& fns,
                       const std::vector<Rational>& constants, const GenerateOptions& opt,
                       size_t* skipped_applications) {
    WorkMeter meter(opt.work_limit, "generation work limit");
    if (skipped_applications)
        *skipped_applications = 0;

    std::map<Rational, KnownInfo> known;
    for (const Rational& p : constants) {
        if (opt.bound && p > *opt.bound)
            continue;
        known.emplace(p, KnownInfo{0, TermBuilder::leaf(p)});
    }

    Fragment out;
    out.budget = opt.budget;

    auto apply_cap = [&](std::map<Rational, KnownInfo>& m) {
        if (!opt.cap)
            return;
        while (m.size() > *opt.cap) {
            auto last = std::prev(m.end());
            out.truncated = true;
            if (!out.complete_below || last->first < *out.complete_below)
                out.complete_below = last->first;
            m.erase(last);
        }
    };
    apply_cap(known);

    for (unsigned d = 1; d <= opt.budget; ++d) {
        std::vector<Rational> vals;
        std::vector<MonotoneTerm> terms;
        std::vector<size_t> frontier_idx;
        vals.reserve(known.size());
        terms.reserve(known.size());
        for (const auto& [v, info] : known) {
            if (info.depth == d - 1)
                frontier_idx.push_back(vals.size());
            vals.push_back(v);
            terms.push_back(info.witness);
        }
        if (frontier_idx.empty() && d > 1)
            break; // nothing new last round, generation is saturated

        std::map<Rational, MonotoneTerm> round_new;
        for (size_t fi = 0; fi < fns.size(); ++fi) {
            const ValueFunction& fn = fns[fi];
            if (fn.arity == 0) {
                if (d == 1) {
                    meter.charge();
                    auto r = fn.eval({});
                    if (r && !(opt.bound && *r > *opt.bound))
                        round_new.try_emplace(*r, TermBuilder::app(static_cast<int>(fi), fn.name,
                                                                   *r, {}));
                }
                continue;
            }
            TupleScan scan(fn, fi, vals, terms, frontier_idx, opt.bound, meter,
                           skipped_applications, round_new);
            scan.run();
        }

        bool grew = false;
        for (auto& [v, t] : round_new) {
            if (known.try_emplace(v, KnownInfo{d, t}).second)
                grew = true;
        }
        apply_cap(known);
        if (!grew)
            break;
    }

    out.values.reserve(known.size());
    out.witnesses.reserve(known.size());
    for (auto& [v, info] : known) {
        out.values.push_back(v);
        out.witnesses.push_back(info.witness);
    }
    return out;
}

Fragment generate(const GeneratorSystem& sys, const GenerateOptions& opt) {
    return generate_with(value_functions(sys), sys.constants(), opt);
}

std::map<BigInt, unsigned> denominator_profile(std::span<const Rational> values) {
    std::map<BigInt, unsigned> out;
    for (const Rational& v : values) {
        BigInt n = v.den();
        unsigned e2 = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++e2;
        }
        if (e2 > 0 && e2 > out[2])
            out[2] = e2;
        for (BigInt d = 3; d * d <= n; d += 2) {
            unsigned e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            if (e > 0 && e > out[d])
                out[d] = e;
        }
        if (n > 1 && out[n] < 1)
            out[n] = 1;
    }
    return out;
}

std::string fragment_to_json(const GeneratorSystem& sys, const Fragment& f) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json fns = nlohmann::ordered_json::array();
    for (const auto& g : sys.functions()) {
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
        for (const auto& a : g.coefficients())
            coeffs.push_back(a.str());
        fns.push_back({{"coefficients", coeffs}, {"constant", g.constant().str()}});
    }
    nlohmann::ordered_json consts = nlohmann::ordered_json::array();
    for (const auto& p : sys.constants())
        consts.push_back(p.str());
    j["system"] = {{"functions", fns}, {"constants", consts}};
    j["budget"] = f.budget;
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
    for (size_t i = 0; i < f.values.size(); ++i) {
        values.push_back(f.values[i].str());
        witnesses.push_back(f.witnesses[i].serialization());
    }
    j["values"] = values;
    j["witnesses"] = witnesses;
    j["truncated"] = f.truncated;
    j["complete_below"] = f.complete_below ? nlohmann::ordered_json(f.complete_below->str())
                                           : nlohmann::ordered_json(nullptr);
    return j.dump();
}

TermEnumerator::TermEnumerator(std::vector<ValueFunction> fns, std::vector<Rational> constants)
    : fns_(std::move(fns)) {
    if (constants.empty())
        throw DomainError("term enumeration needs a nonempty constant pool");
    std::sort(constants.begin(), constants.end());
    constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
    by_apps_.emplace_back();
    for (const Rational& p : constants) {
        seen_.emplace(p, entries_.size());
        by_apps_[0].push_back(entries_.size());
        entries_.push_back(Entry{p, 0, TermBuilder::leaf(p)});
    }
    for (const auto& f : fns_)
        max_arity_ = std::max(max_arity_, f.arity);
}

const TermEnumerator::Entry* TermEnumerator::at(size_t i, WorkMeter& meter) {
    while (i >= entries_.size()) {
        if (!expand_next_layer(meter))
            return nullptr;
    }
    return &entries_[i];
}

bool TermEnumerator::expand_next_layer(WorkMeter& meter) {
    if (exhausted_)
        return false;
    unsigned c = next_layer_;
    // Children of a term at layer c have application counts summing to c-1,
    // each at most last_nonempty_; beyond that no new term can exist.
    if (c > max_arity_ * static_cast<size_t>(last_nonempty_) + 1) {
        exhausted_ = true;
        return false;
    }

    std::map<Rational, MonotoneTerm> fresh;
    std::vector<size_t> arg_entries;

    for (size_t fi = 0; fi < fns_.size(); ++fi) {
        const ValueFunction& fn = fns_[fi];
        if (fn.arity == 0) {
            if (c == 1) {
                meter.charge();
                if (auto r = fn.eval({}))
                    fresh.try_emplace(*r, TermBuilder::app(static_cast<int>(fi), fn.name, *r, {}));
            }
            continue;
        }

        // Distribute c-1 applications over fn.arity children, then take the
        // cartesian product of the per-count value lists.
        std::vector<unsigned> parts(fn.arity, 0);
        auto emit_tuple = [&]() {
            meter.charge();
            std::vector<Rational> args;
            args.reserve(fn.arity);
            Rational max_arg;
            for (size_t j = 0; j < arg_entries.size(); ++j) {
                const Entry& e = entries_[arg_entries[j]];
                args.push_back(e.value);
                if (j == 0 || e.value > max_arg)
                    max_arg = e.value;
            }
            std::optional<Rational> v;
            if (fn.linear)
                v = fn.linear->eval(args);
            else
                v = fn.eval(args);
            if (!v || !(*v > max_arg) || seen_.count(*v))
                return;
            std::vector<MonotoneTerm> children;
            children.reserve(arg_entries.size());
            for (size_t idx : arg_entries)
                children.push_back(entries_[idx].witness);
            MonotoneTerm t = TermBuilder::app(static_cast<int>(fi), fn.name, *v,
                                              std::move(children));
            auto [it, inserted] = fresh.try_emplace(*v, t);
            if (!inserted && t.serialization() < it->second.serialization())
                it->second = t;
        };

        auto cartesian = [&](auto&& self, size_t pos) -> void {
            if (pos == fn.arity) {
                emit_tuple();
                return;
            }
            for (size_t idx : by_apps_[parts[pos]]) {
                arg_entries.push_back(idx);
                self(self, pos + 1);
                arg_entries.pop_back();
            }
        };

        auto compose = [&](auto&& self, size_t pos, unsigned remaining) -> void {
            if (pos + 1 == fn.arity) {
                if (remaining < by_apps_.size() && !by_apps_[remaining].empty()) {
                    parts[pos] = remaining;
                    cartesian(cartesian, 0);
                }
                return;
            }
            for (unsigned take = 0; take <= remaining; ++take) {
                if (take >= by_apps_.size() || by_apps_[take].empty())
                    continue;
                parts[pos] = take;
                self(self, pos + 1, remaining - take);
            }
        };
        compose(compose, 0, c - 1);
    }

    // Within a layer, entries are ordered by canonical witness serialization.
    std::vector<std::pair<std::string, const std::pair<const Rational, MonotoneTerm>*>> order;
    order.reserve(fresh.size());
    for (const auto& kv : fresh)
        order.emplace_back(kv.second.serialization(), &kv);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    by_apps_.emplace_back();
    for (const auto& [text, kv] : order) {
        (void)text;
        seen_.emplace(kv->first, entries_.size());
        by_apps_[c].push_back(entries_.size());
        entries_.push_back(Entry{kv->first, c, kv->second});
    }
    std::sort(by_apps_[c].begin(), by_apps_[c].end(), [&](size_t a, size_t b) {
        return entries_[a].value < entries_[b].value;
    });
    if (!fresh.empty())
        last_nonempty_ = c;
    ++next_layer_;
    return true;
}

} // namespace fusible
