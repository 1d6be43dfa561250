#include "fusible/ordinal.hpp"

#include <algorithm>
#include <cctype>

namespace fusible {

namespace {

const OrdinalTerm kZero;

bool is_one_principal(const std::vector<OrdinalTerm>& args) {
    return args.size() == 2 && args[0].is_zero() && args[1].is_zero();
}

} // namespace

OrdinalTerm OrdinalTerm::from_principal(PPtr p) {
    OrdinalTerm t;
    t.summands_.push_back(std::move(p));
    return t;
}

OrdinalTerm OrdinalTerm::summand(size_t i) const {
    return from_principal(summands_.at(i));
}

const std::vector<OrdinalTerm>& OrdinalTerm::principal_args() const {
    if (!is_principal())
        throw DomainError("not a principal term");
    return summands_.front()->args;
}

OrdinalTerm OrdinalTerm::finite(unsigned long long k) {
    static const PPtr one = [] {
        auto p = std::make_shared<Principal>();
        p->args = {OrdinalTerm(), OrdinalTerm()};
        p->text = "(phi 0 0)";
        return p;
    }();
    if (k > 1'000'000)
        throw DomainError("finite ordinal literal too large");
    OrdinalTerm t;
    t.summands_.assign(k, one);
    return t;
}

OrdinalTerm OrdinalTerm::omega() {
    return omega_power(finite(1));
}

OrdinalTerm OrdinalTerm::omega_power(const OrdinalTerm& gamma, bool* changed) {
    return veblen({OrdinalTerm(), gamma}, changed);
}

// Does phi(args) collapse onto args[j]?  Requires args[j] to be the last
// nonzero argument.  The value of args[j] must be a common fixed point of
// x |-> phi(args[0..j), x, 0...), which, comparing the two argument tuples
// right-aligned, happens exactly when the tuple of args[j] dominates the
// enclosing prefix at some position ahead of the variable slot.
bool OrdinalTerm::absorbed_by_last(const std::vector<OrdinalTerm>& args, size_t j) {
    const OrdinalTerm& cand = args[j];
    if (!cand.is_principal())
        return false;
    const std::vector<OrdinalTerm>& c = cand.principal_args();
    const size_t n = args.size(), m = c.size();
    const size_t frame = std::max(n, m);
    auto a_at = [&](size_t k) -> const OrdinalTerm& {
        return k < frame - n ? kZero : args[k - (frame - n)];
    };
    auto c_at = [&](size_t k) -> const OrdinalTerm& {
        return k < frame - m ? kZero : c[k - (frame - m)];
    };
    const size_t slot = j + (frame - n);
    for (size_t k = 0; k < slot; ++k) {
        auto o = compare(a_at(k), c_at(k));
        if (o == std::strong_ordering::equal)
            continue;
        if (o == std::strong_ordering::greater)
            return false;
        for (size_t mid = k + 1; mid < slot; ++mid)
            if (compare(a_at(mid), cand) != std::strong_ordering::less)
                return false;
        return true;
    }
    return false;
}

OrdinalTerm OrdinalTerm::veblen(std::vector<OrdinalTerm> args, bool* changed) {
    if (args.empty())
        throw DomainError("phi needs at least one argument");
    size_t lead = 0;
    while (args.size() - lead > 2 && args[lead].is_zero())
        ++lead;
    args.erase(args.begin(), args.begin() + lead);
    while (args.size() < 2)
        args.insert(args.begin(), OrdinalTerm());

    size_t j = args.size();
    while (j > 0 && args[j - 1].is_zero())
        --j;
    if (j > 0 && absorbed_by_last(args, j - 1)) {
        if (changed)
            *changed = true;
        return args[j - 1];
    }

    auto p = std::make_shared<Principal>();
    p->text = "(phi";
    for (const auto& a : args) {
        p->text += ' ';
        p->text += a.str();
    }
    p->text += ')';
    p->args = std::move(args);
    return from_principal(std::move(p));
}

OrdinalTerm OrdinalTerm::ordinal_sum(const std::vector<OrdinalTerm>& parts, bool* changed) {
    OrdinalTerm out;
    for (const auto& part : parts) {
        for (const auto& p : part.summands_) {
            while (!out.summands_.empty() &&
                   cmp_principal(out.summands_.back(), p) == std::strong_ordering::less) {
                out.summands_.pop_back();
                if (changed)
                    *changed = true;
            }
            out.summands_.push_back(p);
        }
    }
    return out;
}

std::strong_ordering OrdinalTerm::cmp_principal(const PPtr& p, const PPtr& q) {
    if (p == q || p->text == q->text)
        return std::strong_ordering::equal;
    const size_t n = p->args.size(), m = q->args.size();
    const size_t frame = std::max(n, m);
    auto p_at = [&](size_t k) -> const OrdinalTerm& {
        return k < frame - n ? kZero : p->args[k - (frame - n)];
    };
    auto q_at = [&](size_t k) -> const OrdinalTerm& {
        return k < frame - m ? kZero : q->args[k - (frame - m)];
    };
    for (size_t k = 0; k < frame; ++k) {
        auto o = compare(p_at(k), q_at(k));
        if (o == std::strong_ordering::equal)
            continue;
        if (o == std::strong_ordering::less) {
            // p < q iff every later argument of p stays below q
            OrdinalTerm qt = from_principal(q);
            for (size_t j = k + 1; j < frame; ++j)
                if (compare(p_at(j), qt) != std::strong_ordering::less)
                    return std::strong_ordering::greater;
            return std::strong_ordering::less;
        }
        OrdinalTerm pt = from_principal(p);
        for (size_t j = k + 1; j < frame; ++j)
            if (compare(q_at(j), pt) != std::strong_ordering::less)
                return std::strong_ordering::less;
        return std::strong_ordering::greater;
    }
    // identical padded arguments would have produced identical text
    throw Error("principal comparison fell through; normal form violated");
}

std::strong_ordering compare(const OrdinalTerm& a, const OrdinalTerm& b) {
    const size_t n = std::min(a.summands_.size(), b.summands_.size());
    for (size_t i = 0; i < n; ++i) {
        auto o = OrdinalTerm::cmp_principal(a.summands_[i], b.summands_[i]);
        if (o != std::strong_ordering::equal)
            return o;
    }
    return a.summands_.size() <=> b.summands_.size();
}

bool operator==(const OrdinalTerm& a, const OrdinalTerm& b) {
    if (a.summands_.size() != b.summands_.size())
        return false;
    for (size_t i = 0; i < a.summands_.size(); ++i)
        if (a.summands_[i] != b.summands_[i] &&
            a.summands_[i]->text != b.summands_[i]->text)
            return false;
    return true;
}

std::string OrdinalTerm::str() const {
    if (summands_.empty())
        return "0";
    size_t tail_ones = 0;
    while (tail_ones < summands_.size() &&
           is_one_principal(summands_[summands_.size() - 1 - tail_ones]->args))
        ++tail_ones;
    const size_t lead = summands_.size() - tail_ones;
    if (lead == 0)
        return std::to_string(tail_ones);
    if (lead == 1 && tail_ones == 0)
        return summands_.front()->text;
    std::string out = "(+";
    for (size_t i = 0; i < lead; ++i) {
        out += ' ';
        out += summands_[i]->text;
    }
    if (tail_ones > 0)
        out += ' ' + std::to_string(tail_ones);
    out += ')';
    return out;
}

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;
    bool changed = false;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ParseError(why + " at offset " + std::to_string(pos) + " in ordinal term '" +
                         std::string(text) + "'");
    }

    std::string_view symbol() {
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos)
            fail("expected a symbol");
        return text.substr(start, pos - start);
    }

    OrdinalTerm term() {
        skip_ws();
        if (pos >= text.size())
            fail("unexpected end of input");
        if (text[pos] == '(') {
            ++pos;
            skip_ws();
            std::string_view head = symbol();
            std::vector<OrdinalTerm> items;
            while (true) {
                skip_ws();
                if (pos >= text.size())
                    fail("missing ')'");
                if (text[pos] == ')') {
                    ++pos;
                    break;
                }
                items.push_back(term());
            }
            if (head == "phi") {
                if (items.empty())
                    fail("empty phi application");
                return OrdinalTerm::veblen(std::move(items), &changed);
            }
            if (head == "+") {
                if (items.empty())
                    fail("empty sum");
                return OrdinalTerm::ordinal_sum(items, &changed);
            }
            fail("unknown operator '" + std::string(head) + "'");
        }
        std::string_view sym = symbol();
        for (char c : sym)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                fail("expected a numeral or '('");
        unsigned long long k = 0;
        for (char c : sym) {
            k = k * 10 + static_cast<unsigned long long>(c - '0');
            if (k > 1'000'000)
                fail("numeral too large");
        }
        return OrdinalTerm::finite(k);
    }

    OrdinalTerm run() {
        OrdinalTerm t = term();
        skip_ws();
        if (pos != text.size())
            fail("trailing input");
        return t;
    }
};

} // namespace

OrdinalTerm OrdinalTerm::parse(std::string_view text) {
    Parser p{text};
    return p.run();
}

OrdinalTerm OrdinalTerm::parse_exact(std::string_view text) {
    Parser p{text};
    OrdinalTerm t = p.run();
    if (p.changed)
        throw ParseError("ordinal term '" + std::string(text) + "' is not in normal form");
    return t;
}

OrdinalTerm nat_sum(const OrdinalTerm& a, const OrdinalTerm& b) {
    // merge the two nonincreasing summand lists
    OrdinalTerm out;
    size_t i = 0, j = 0;
    const size_t n = a.summand_count(), m = b.summand_count();
    std::vector<OrdinalTerm> parts;
    while (i < n || j < m) {
        if (i == n)
            parts.push_back(b.summand(j++));
        else if (j == m)
            parts.push_back(a.summand(i++));
        else if (compare(a.summand(i), b.summand(j)) == std::strong_ordering::less)
            parts.push_back(b.summand(j++));
        else
            parts.push_back(a.summand(i++));
    }
    bool changed = false;
    out = OrdinalTerm::ordinal_sum(parts, &changed);
    if (changed)
        throw Error("natural sum of normal forms produced an absorption; invariant violated");
    return out;
}

namespace {

// log of a principal term: gamma for omega^gamma = phi(0, gamma); the term
// itself when it is an epsilon number (any other normalized application).
OrdinalTerm principal_log(const OrdinalTerm& p) {
    const auto& args = p.principal_args();
    if (args.size() == 2 && args[0].is_zero())
        return args[1];
    return p;
}

} // namespace

OrdinalTerm nat_prod(const OrdinalTerm& a, const OrdinalTerm& b) {
    OrdinalTerm acc;
    for (size_t i = 0; i < a.summand_count(); ++i) {
        OrdinalTerm la = principal_log(a.summand(i));
        for (size_t j = 0; j < b.summand_count(); ++j) {
            OrdinalTerm lb = principal_log(b.summand(j));
            acc = nat_sum(acc, OrdinalTerm::omega_power(nat_sum(la, lb)));
        }
    }
    return acc;
}

OrdinalKind classify_limit(const OrdinalTerm& a) {
    if (a.is_zero())
        return OrdinalKind::zero;
    OrdinalTerm last = a.summand(a.summand_count() - 1);
    if (last == OrdinalTerm::finite(1))
        return OrdinalKind::successor;
    return OrdinalKind::limit;
}

OrdinalTerm expected_order_type(OrderTypeKind kind, unsigned n) {
    if (kind == OrderTypeKind::fusible) {
        if (n < 2)
            throw DomainError("the mean family is defined for n >= 2");
        return OrdinalTerm::veblen({OrdinalTerm::finite(n - 1), OrdinalTerm()});
    }
    if (n < 3)
        throw DomainError("the continuous construction needs n >= 3");
    std::vector<OrdinalTerm> args;
    args.push_back(OrdinalTerm::finite(1));
    for (unsigned i = 0; i < n; ++i)
        args.push_back(OrdinalTerm());
    return OrdinalTerm::veblen(std::move(args));
}

std::string order_name(std::strong_ordering o) {
    if (o < 0)
        return "less";
    if (o > 0)
        return "greater";
    return "equal";
}

std::string ordinal_kind_name(OrdinalKind k) {
    switch (k) {
    case OrdinalKind::zero: return "zero";
    case OrdinalKind::successor: return "successor";
    default: return "limit";
    }
}

} // namespace fusible
