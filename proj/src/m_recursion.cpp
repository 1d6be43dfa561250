#include "fusible/m_recursion.hpp"

#include <json.hpp>

namespace fusible {

namespace {

std::string explicit_fraction(const Rational& r) {
    return r.num().str() + "/" + r.den().str();
}

} // namespace

std::string MTrace::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["x"] = explicit_fraction(x);
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    for (const auto& v : t)
        ts.push_back(explicit_fraction(v));
    j["t"] = ts;
    j["M"] = explicit_fraction(output);
    return j.dump();
}

MEngine::MEngine(unsigned n, unsigned long long work_budget)
    : n_(n), meter_(work_budget, "M_" + std::to_string(n) + " work budget") {
    if (n < 2)
        throw DomainError("M_n requires n >= 2");
}

unsigned long long MEngine::default_work_budget() {
    return 4'000'000;
}

std::optional<Rational> MEngine::lookup(const Rational& x) const {
    auto it = memo_.find(x);
    if (it == memo_.end())
        return std::nullopt;
    return it->second;
}

Rational MEngine::value(const Rational& x) {
    if (x.is_negative())
        return -x;
    return compute(x);
}

Rational MEngine::compute(const Rational& x0) {
    if (auto v = lookup(x0))
        return *v;

    struct Frame {
        Rational x;
        std::vector<Rational> t; // t_0 .. t_i computed so far
    };
    std::vector<Frame> stack;
    meter_.charge();
    stack.push_back(Frame{x0, {Rational(1)}});

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.t.size() == n_ + 1) {
            memo_.emplace(f.x, f.t.back() / Rational(n_));
            stack.pop_back();
            continue;
        }
        Rational y = f.x - f.t.back();
        if (y.is_negative()) {
            f.t.push_back(-y);
            continue;
        }
        if (auto v = lookup(y)) {
            f.t.push_back(*v);
            continue;
        }
        meter_.charge();
        stack.push_back(Frame{std::move(y), {Rational(1)}});
    }
    return memo_.at(x0);
}

Rational MEngine::point(const Rational& x) {
    return x + value(x);
}

Rational MEngine::t(unsigned i, const Rational& x) {
    if (x.is_negative())
        throw DomainError("t_i(x) requires x >= 0");
    if (i > n_)
        throw DomainError("t index out of range");
    Rational cur(1);
    for (unsigned k = 1; k <= i; ++k)
        cur = value(x - cur);
    return cur;
}

MTrace MEngine::trace(const Rational& x) {
    MTrace tr;
    tr.n = n_;
    tr.x = x;
    if (x.is_negative()) {
        tr.output = -x;
        return tr;
    }
    tr.t.push_back(Rational(1));
    for (unsigned i = 1; i <= n_; ++i)
        tr.t.push_back(value(x - tr.t.back()));
    tr.output = tr.t.back() / Rational(n_);
    return tr;
}

ExtRational MEngine::big_u(unsigned i, const Rational& x) {
    if (i >= n_)
        throw DomainError("U_i is defined for 0 <= i < n");
    if (i == 0)
        return ExtRational::plus_inf();
    return ExtRational(t(i, x) / Rational(i));
}

bool MEngine::in_j(unsigned i, const Rational& x, const Rational& y) {
    if (y < x - t(i, x))
        return false;
    ExtRational upper = ExtRational(x) + big_u(i, x);
    return ExtRational(y) < upper;
}

Rational MEngine::lift(unsigned i, const Rational& x, const Rational& y) {
    if (x.is_negative())
        throw DomainError("lift requires x >= 0");
    if (i >= n_)
        throw DomainError("lift index out of range");
    if (!in_j(i, x, y))
        throw DomainError("lift argument outside J_" + std::to_string(i) + "(" + x.str() + ")");
    Rational denom(static_cast<long long>(i) + 1);
    return (Rational(static_cast<long long>(i)) * x + t(i, x) + y) / denom;
}

std::string InvariantReport::to_json() const {
    nlohmann::ordered_json j;
    j["checks"] = checks.size();
    j["violations"] = violations;
    nlohmann::ordered_json fails = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        if (!c.holds)
            fails.push_back({{"rule", c.rule}, {"detail", c.detail}});
    j["failures"] = fails;
    return j.dump();
}

namespace {

void record(InvariantReport& rep, const std::string& rule, const std::string& detail, bool ok) {
    rep.checks.push_back(InvariantCheck{rule, detail, ok});
    if (!ok)
        ++rep.violations;
}

std::string describe(const Rational& x, const Rational& d, unsigned i) {
    return "x=" + x.str() + " d=" + d.str() + " i=" + std::to_string(i);
}

} // namespace

InvariantReport check_m_invariants(MEngine& eng, const std::vector<InvariantSample>& samples) {
    InvariantReport rep;
    const unsigned n = eng.n();
    const Rational one(1);

    for (const auto& s : samples) {
        const Rational& x = s.x;
        const Rational mx = eng.value(x);

        // M(x+d) = M(x) - d for 0 <= d < M(x)
        {
            Rational d = s.d * mx;
            record(rep, "shift-identity", describe(x, d, 0),
                   eng.value(x + d) == mx - d);
        }

        // x + M(x) <= y + M(y), equality iff y < x + M(x)
        {
            Rational y = x + s.d * mx;
            Rational lhs = x + mx, rhs = y + eng.value(y);
            bool ok = lhs <= rhs && (y < lhs ? lhs == rhs : lhs < rhs);
            record(rep, "endpoint-monotone", "x=" + x.str() + " y=" + y.str(), ok);
            Rational y2 = x + mx; // boundary: strictly larger endpoint
            record(rep, "endpoint-monotone", "x=" + x.str() + " y=" + y2.str(),
                   lhs < y2 + eng.value(y2));
        }

        if (x.is_negative())
            continue;

        // t_i(x) >= i M(x)
        for (unsigned i = 0; i <= n; ++i)
            record(rep, "t-floor", describe(x, s.d, i),
                   eng.t(i, x) >= Rational(static_cast<long long>(i)) * mx);

        // t_i(x)/i >= t_{i+1}(x)/(i+1)
        for (unsigned i = 1; i + 1 <= n; ++i)
            record(rep, "t-ratio", describe(x, s.d, i),
                   eng.t(i, x) / Rational(i) >= eng.t(i + 1, x) / Rational(i + 1LL));

        // U_i(x) > M(x)
        for (unsigned i = 0; i < n; ++i)
            record(rep, "u-dominates", describe(x, s.d, i), eng.big_u(i, x) > ExtRational(mx));

        // t_i(x+d) = t_i(x) - d i for 0 <= d < t_i(x)/i
        for (unsigned i = 1; i <= n; ++i) {
            Rational ti = eng.t(i, x);
            Rational d = s.d * (ti / Rational(i));
            record(rep, "t-linearity", describe(x, d, i),
                   eng.t(i, x + d) == ti - d * Rational(i));
        }

        // t_i(x-d) <= t_i(x) + d i for 0 <= d <= x
        for (unsigned i = 1; i <= n; ++i) {
            Rational d = s.d * x;
            record(rep, "t-reverse-bound", describe(x, d, i),
                   eng.t(i, x - d) <= eng.t(i, x) + d * Rational(i));
        }

        // the lift rules want a y inside J_i(x)
        unsigned i = s.i < n ? s.i : n - 1;
        {
            Rational ti = eng.t(i, x);
            Rational span = ti; // finite slice of J_i even when U_i = +inf
            if (i > 0)
                span += min(ti / Rational(i), one);
            else
                span += one;
            Rational y = x - ti + s.d * span;
            Rational lifted = eng.lift(i, x, y);
            Rational my = eng.value(y);

            record(rep, "lift-trace", describe(x, y, i), eng.t(i + 1, lifted) == my);
            if (i + 1 == n)
                record(rep, "lift-top-scale", describe(x, y, i),
                       eng.value(lifted) == my / Rational(n));
            else
                record(rep, "lift-u-scale", describe(x, y, i),
                       eng.big_u(i + 1, lifted) == ExtRational(my / Rational(i + 1LL)));
        }
    }
    return rep;
}

std::vector<InvariantSample> default_invariant_samples(unsigned n) {
    std::vector<InvariantSample> out;
    const Rational step(1, 16);
    const Rational hi = n == 2 ? Rational(3, 2) : Rational(1);
    const std::vector<Rational> fracs = {Rational(0), Rational(1, 4), Rational(1, 2),
                                         Rational(3, 4)};
    unsigned i = 0;
    for (Rational x(-1); x <= hi; x += step) {
        for (const auto& f : fracs) {
            out.push_back(InvariantSample{x, f, i % n});
            ++i;
        }
    }
    return out;
}

} // namespace fusible
