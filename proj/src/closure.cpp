#include "fusible/closure.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>

namespace fusible {

UnaryAffine diagonal_section(const LinearFunction& g, const std::set<size_t>& diagonal,
                             std::span<const Rational> params) {
    size_t n = g.arity();
    if (params.size() + diagonal.size() != n)
        throw DomainError("section parameter count does not match arity");
    Rational slope(0), offset = g.constant();
    size_t pi = 0;
    for (size_t j = 1; j <= n; ++j) {
        if (diagonal.count(j))
            slope += g.coefficient(j - 1);
        else
            offset += g.coefficient(j - 1) * params[pi++];
    }
    return UnaryAffine(slope, offset);
}

ClosureSystem::ClosureSystem(LinearFunction base, std::vector<Rational> constants,
                             std::vector<DerivedFunction> derived)
    : base_(std::move(base)), constants_(std::move(constants)) {
    std::sort(constants_.begin(), constants_.end());
    constants_.erase(std::unique(constants_.begin(), constants_.end()), constants_.end());
    if (constants_.empty())
        throw DomainError("closure system needs a nonempty constant pool");

    // Deduplicate derived functions that coincide as linear maps.
    std::map<LinearFunction, std::vector<std::set<size_t>>> grouped;
    for (auto& d : derived)
        grouped[d.fn].push_back(d.diagonal);
    for (auto& [fn, us] : grouped) {
        std::sort(us.begin(), us.end());
        derived_.push_back(DerivedFunction{us.front(), fn});
        diagonal_groups_.push_back(us);
    }
}

const std::vector<std::set<size_t>>& ClosureSystem::diagonals_of(size_t index) const {
    return diagonal_groups_.at(index);
}

GeneratorSystem ClosureSystem::enumeration_system() const {
    std::vector<LinearFunction> fns;
    fns.push_back(base_);
    for (const auto& d : derived_)
        fns.push_back(d.fn);
    return GeneratorSystem(std::move(fns), constants_);
}

std::string ClosureSystem::to_json() const {
    nlohmann::ordered_json j;
    auto fn_json = [](const LinearFunction& g) {
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
        for (const auto& a : g.coefficients())
            coeffs.push_back(a.str());
        return nlohmann::ordered_json{{"coefficients", coeffs}, {"constant", g.constant().str()}};
    };
    j["base"] = fn_json(base_);
    nlohmann::ordered_json consts = nlohmann::ordered_json::array();
    for (const auto& p : constants_)
        consts.push_back(p.str());
    j["constants"] = consts;
    nlohmann::ordered_json derived = nlohmann::ordered_json::array();
    for (size_t i = 0; i < derived_.size(); ++i) {
        nlohmann::ordered_json diags = nlohmann::ordered_json::array();
        for (const auto& u : diagonal_groups_[i]) {
            nlohmann::ordered_json us = nlohmann::ordered_json::array();
            for (size_t idx : u)
                us.push_back(idx);
            diags.push_back(us);
        }
        nlohmann::ordered_json d = fn_json(derived_[i].fn);
        d["diagonals"] = diags;
        derived.push_back(d);
    }
    j["derived"] = derived;
    return j.dump();
}

ClosureSystem build_closure(const LinearFunction& g, std::vector<Rational> constants) {
    size_t n = g.arity();
    if (n == 0)
        throw DomainError("closure construction requires arity >= 1");
    if (!g.all_coefficients_positive())
        throw DomainError("closure construction requires strictly positive coefficients; "
                          "collapse zero coefficients first");
    std::sort(constants.begin(), constants.end());
    constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
    if (constants.empty())
        throw DomainError("closure construction requires a nonempty constant pool");

    bool has_seed = false;
    for (const auto& p : constants) {
        std::vector<Rational> diag(n, p);
        if (g.eval(diag) > p) {
            has_seed = true;
            break;
        }
    }
    if (!has_seed)
        throw DomainError("closure construction requires some p in P with g(p,...,p) > p");

    std::vector<DerivedFunction> derived;
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
        std::set<size_t> u;
        Rational slope(0);
        for (size_t j = 1; j <= n; ++j)
            if (mask & (size_t{1} << (j - 1))) {
                u.insert(j);
                slope += g.coefficient(j - 1);
            }
        if (slope >= Rational(1))
            continue;
        Rational scale = Rational(1) - slope; // fix(ax+b) = b/(1-a)
        std::vector<Rational> coeffs;
        for (size_t j = 1; j <= n; ++j)
            if (!u.count(j))
                coeffs.push_back(g.coefficient(j - 1) / scale);
        derived.push_back(DerivedFunction{std::move(u),
                                          LinearFunction(std::move(coeffs), g.constant() / scale)});
    }
    return ClosureSystem(g, std::move(constants), std::move(derived));
}

namespace {

std::vector<ValueFunction> closure_value_functions(const ClosureSystem& sys) {
    std::vector<ValueFunction> out;
    auto push = [&out](const LinearFunction* g, std::string name) {
        ValueFunction vf;
        vf.arity = g->arity();
        vf.name = std::move(name);
        vf.eval = [g](std::span<const Rational> args) -> std::optional<Rational> {
            return g->eval(args);
        };
        vf.linear = g;
        out.push_back(std::move(vf));
    };
    push(&sys.base(), "g");
    for (size_t i = 0; i < sys.derived().size(); ++i)
        push(&sys.derived()[i].fn, "u" + std::to_string(i + 1));
    return out;
}

} // namespace

struct SuccessorEngine::DepthGuard {
    SuccessorEngine& e;
    explicit DepthGuard(SuccessorEngine& eng) : e(eng) {
        if (++e.depth_ > e.opt_.recursion_limit)
            throw ResourceError("successor engine recursion limit exceeded", e.depth_);
    }
    ~DepthGuard() { --e.depth_; }
};

SuccessorEngine::SuccessorEngine(ClosureSystem system)
    : SuccessorEngine(std::move(system), Options{}) {}

SuccessorEngine::SuccessorEngine(ClosureSystem system, Options opt)
    : sys_(std::move(system)), opt_(opt),
      meter_(opt.work_budget, "successor engine work budget"),
      enum_(closure_value_functions(sys_), sys_.constants()) {}

const TermEnumerator::Entry* SuccessorEngine::enumerated(size_t i) {
    return enum_.at(i, meter_);
}

ExtRational SuccessorEngine::min_constant_above(const ExtRational& r) const {
    for (const auto& p : sys_.constants())
        if (ExtRational(p) > r)
            return ExtRational(p);
    return ExtRational::plus_inf();
}

ExtRational SuccessorEngine::succ(const ExtRational& r) {
    ++stats_.succ_calls;
    if (r.is_plus_inf())
        return ExtRational::plus_inf();
    if (auto it = succ_memo_.find(r); it != succ_memo_.end())
        return it->second;
    DepthGuard guard(*this);
    meter_.charge();
    ExtRational v = succ_uncached(r);
    succ_memo_.emplace(r, v);
    stats_.work = meter_.spent;
    return v;
}

ExtRational SuccessorEngine::succ_uncached(const ExtRational& r) {
    ExtRational m = built_succ(r, {});
    return min(m, min_constant_above(r));
}

ExtRational SuccessorEngine::built_succ(const ExtRational& r, std::vector<Rational> prefix) {
    ++stats_.built_succ_calls;
    if (prefix.size() > sys_.base().arity())
        throw DomainError("built_succ prefix longer than the arity");
    for (const auto& y : prefix)
        if (ExtRational(y) > r)
            throw DomainError("built_succ prefix element above r");
    auto key = std::make_pair(r, prefix);
    if (auto it = built_memo_.find(key); it != built_memo_.end())
        return it->second;
    DepthGuard guard(*this);
    meter_.charge();
    ExtRational v = built_succ_uncached(r, prefix);
    built_memo_.emplace(std::move(key), v);
    return v;
}

ExtRational SuccessorEngine::built_succ_uncached(const ExtRational& r,
                                                 const std::vector<Rational>& prefix) {
    const LinearFunction& g = sys_.base();
    const size_t n = g.arity();
    const size_t k = prefix.size();

    if (k == n)
        return ExtRational(g.eval(prefix));

    ExtRational x = weak_pred(r);
    ExtRational m = ExtRational::plus_inf();
    const Rational& ak = g.coefficient(k);

    auto loop_value = [&](const ExtRational& xv) {
        std::vector<ExtRational> args;
        args.reserve(n);
        for (const auto& y : prefix)
            args.emplace_back(y);
        args.push_back(xv);
        for (size_t j = k + 1; j < n; ++j)
            args.push_back(r);
        return g.eval_extended(args);
    };

    while (loop_value(x) > r) {
        assert(x.is_finite());
        std::vector<Rational> longer = prefix;
        longer.push_back(x.finite_value());
        ExtRational s = built_succ(r, std::move(longer));
        ExtRational xp = x - (s - r) / ak;
        ExtRational xpp = succ(xp);
        ExtRational mp = r + ak * (xpp - xp);
        if (mp < m)
            m = mp;
        if (!xpp.is_finite())
            break; // no further element of F to lower x toward
        x = pred(xpp.finite_value());
    }
    return m;
}

ExtRational SuccessorEngine::pred(const Rational& r) {
    ++stats_.pred_calls;
    if (auto it = pred_memo_.find(r); it != pred_memo_.end())
        return it->second;
    DepthGuard guard(*this);
    meter_.charge();
    ExtRational v = pred_uncached(r);
    pred_memo_.emplace(r, v);
    return v;
}

ExtRational SuccessorEngine::pred_uncached(const Rational& r) {
    if (r <= sys_.min_constant())
        return ExtRational::minus_inf();
    for (size_t i = 0;; ++i) {
        if (i >= opt_.pred_scan_cap)
            throw ResourceError("pred: input not certified a successor element within the scan cap",
                                i);
        const TermEnumerator::Entry* e = enum_.at(i, meter_);
        if (!e)
            throw DomainError("pred: input is not a successor element of the (finite) closure");
        if (e->value < r && succ(ExtRational(e->value)) == ExtRational(r))
            return ExtRational(e->value);
    }
}

ExtRational SuccessorEngine::weak_pred(const ExtRational& r) {
    ++stats_.weak_pred_calls;
    if (r.is_plus_inf())
        throw DomainError("weak_pred(+inf) is undefined");
    if (auto it = weak_memo_.find(r); it != weak_memo_.end())
        return it->second;
    DepthGuard guard(*this);
    meter_.charge();
    ExtRational v = weak_pred_uncached(r);
    weak_memo_.emplace(r, v);
    return v;
}

ExtRational SuccessorEngine::weak_pred_uncached(const ExtRational& r) {
    if (r < ExtRational(sys_.min_constant()))
        return ExtRational::minus_inf();
    for (size_t i = 0;; ++i) {
        if (i >= opt_.pred_scan_cap)
            throw ResourceError("weak_pred scan cap exceeded", i);
        const TermEnumerator::Entry* e = enum_.at(i, meter_);
        if (!e)
            throw Error("weak_pred: enumeration exhausted; closure invariant violated");
        ExtRational z{e->value};
        if (z == r)
            return z;
        if (z < r && succ(z) > r)
            return z;
    }
}

bool SuccessorEngine::is_in_closure(const Rational& r) {
    return weak_pred(ExtRational(r)) == ExtRational(r);
}

} // namespace fusible
