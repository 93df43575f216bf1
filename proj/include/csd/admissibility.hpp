#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "csd/rational.hpp"

namespace csd::admissibility {

/** Exponent six-tuple for the bilinear wave-Sobolev product estimate
 * || u v ||_{H^{-s0,-b0}} <~ || u ||_{H^{s1,b1}} || v ||_{H^{s2,b2}}. */
struct ExponentTuple {
    ExtendedRational s0, s1, s2, b0, b1, b2;
};

struct ConditionResult {
    std::string condition;     // verbatim inequality
    ExtendedRational margin;   // lhs - rhs, exact
    bool strict;               // ">" vs ">="
    bool pass;
};

/** Per-condition record for the 18 admissibility inequalities. Exactly one
 * condition ("s1 + s2 >= max(0, -b0)") is non-strict. */
struct ConditionReport {
    std::array<ConditionResult, 18> entries;

    bool admissible() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    std::vector<std::string> violated() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (!e.pass) out.push_back(e.condition);
        return out;
    }
};

namespace detail {

struct ConditionDef {
    const char* text;
    bool strict;
    ExtendedRational (*margin)(const ExponentTuple&);
};

inline ExtendedRational er(long long num, long long den) { return ExtendedRational(num, den); }

// margin = lhs - rhs for each of the 18 conditions.
inline const std::array<ConditionDef, 18>& conditions() {
    using T = const ExponentTuple&;
    static const std::array<ConditionDef, 18> defs = {{
        {"b0 + b1 + b2 > 1/2", true, [](T t) { return t.b0 + t.b1 + t.b2 - er(1, 2); }},
        {"b0 + b1 > 0", true, [](T t) { return t.b0 + t.b1; }},
        {"b0 + b2 > 0", true, [](T t) { return t.b0 + t.b2; }},
        {"b1 + b2 > 0", true, [](T t) { return t.b1 + t.b2; }},
        {"s0 + s1 + s2 > 3/2 - (b0 + b1 + b2)", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b0 + t.b1 + t.b2 - er(3, 2); }},
        {"s0 + s1 + s2 > 1 - (b0 + b1)", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b0 + t.b1 - er(1, 1); }},
        {"s0 + s1 + s2 > 1 - (b0 + b2)", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b0 + t.b2 - er(1, 1); }},
        {"s0 + s1 + s2 > 1 - (b1 + b2)", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b1 + t.b2 - er(1, 1); }},
        {"s0 + s1 + s2 > 1/2 - b0", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b0 - er(1, 2); }},
        {"s0 + s1 + s2 > 1/2 - b1", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b1 - er(1, 2); }},
        {"s0 + s1 + s2 > 1/2 - b2", true,
         [](T t) { return t.s0 + t.s1 + t.s2 + t.b2 - er(1, 2); }},
        {"s0 + s1 + s2 > 3/4", true, [](T t) { return t.s0 + t.s1 + t.s2 - er(3, 4); }},
        {"(s0 + b0) + 2 s1 + 2 s2 > 1", true,
         [](T t) {
             return t.s0 + t.b0 + Rational(2) * t.s1 + Rational(2) * t.s2 - er(1, 1);
         }},
        {"2 s0 + (s1 + b1) + 2 s2 > 1", true,
         [](T t) {
             return Rational(2) * t.s0 + t.s1 + t.b1 + Rational(2) * t.s2 - er(1, 1);
         }},
        {"2 s0 + 2 s1 + (s2 + b2) > 1", true,
         [](T t) {
             return Rational(2) * t.s0 + Rational(2) * t.s1 + t.s2 + t.b2 - er(1, 1);
         }},
        {"s1 + s2 >= max(0, -b0)", false,
         [](T t) { return t.s1 + t.s2 - max_with_zero(-t.b0); }},
        {"s0 + s2 > max(0, -b1)", true,
         [](T t) { return t.s0 + t.s2 - max_with_zero(-t.b1); }},
        {"s0 + s1 > max(0, -b2)", true,
         [](T t) { return t.s0 + t.s1 - max_with_zero(-t.b2); }},
    }};
    return defs;
}

}  // namespace detail

// Exact evaluation of all 18 conditions; pure function of exact arithmetic.
inline ConditionReport evaluate_conditions(const ExponentTuple& t) {
    ConditionReport r;
    const auto& defs = detail::conditions();
    for (size_t i = 0; i < defs.size(); ++i) {
        const ExtendedRational m = defs[i].margin(t);
        r.entries[i] = ConditionResult{defs[i].text, m, defs[i].strict,
                                       defs[i].strict ? m.positive() : m.nonnegative()};
    }
    return r;
}

/** One-parameter tuple family, affine in the regularity parameter s:
 * tuple(s) = base + s * slope, entrywise over ExtendedRationals. */
struct TupleFamily {
    std::string name;
    std::string note;  // regime and epsilon instantiation, one line
    ExponentTuple base;
    ExponentTuple slope;
    std::vector<Rational> sample_s;

    ExponentTuple at(const Rational& s) const {
        return {base.s0 + s * slope.s0, base.s1 + s * slope.s1, base.s2 + s * slope.s2,
                base.b0 + s * slope.b0, base.b1 + s * slope.b1, base.b2 + s * slope.b2};
    }
};

/** The shipped corpus: every exponent-tuple display used by the product
 * estimates behind the well-posedness and uniqueness arguments, one consistent
 * epsilon instantiation per display, sampled over its stated regime. */
inline const std::vector<TupleFamily>& builtin_families() {
    using detail::er;
    const ExtendedRational zero{};
    const ExtendedRational one{Rational(1)};
    const ExtendedRational eps{Rational(0), Rational(1)};
    const ExtendedRational half_p = er(1, 2) + eps;             // 1/2 + eps
    const ExtendedRational half_mm{Rational(1, 2), Rational(-2)};  // 1/2 - 2 eps

    static const std::vector<TupleFamily> fams = [&] {
        std::vector<TupleFamily> v;
        // Low-regularity regime 1/4 < s < 3/4, first dual factor:
        // s0 = 1/4-, b0 = -1/4-, s1 = s2 = s, b1 = b2 = 1/2 + eps.
        v.push_back(TupleFamily{
            "wp_low_first", "regime 1/4 < s < 3/4; ticks at unit eps scale",
            {er(1, 4) - eps, zero, zero, -er(1, 4) - eps, half_p, half_p},
            {zero, one, one, zero, zero, zero},
            {Rational(3, 10), Rational(1, 2), Rational(7, 10)}});
        // Low-regularity regime, second dual factor:
        // s0 = 3/4+, b0 = 1/4+, s1 = s, s2 = -s, b1 = 1/2 + eps, b2 = 1/2 - 2 eps.
        v.push_back(TupleFamily{
            "wp_low_second", "regime 1/4 < s < 3/4; ticks at unit eps scale",
            {er(3, 4) + eps, zero, zero, er(1, 4) + eps, half_p, half_mm},
            {zero, one, -one, zero, zero, zero},
            {Rational(3, 10), Rational(1, 2), Rational(7, 10)}});
        // High-regularity regime s >= 3/4, first factor: s0 = 1 - s -, rest as above.
        v.push_back(TupleFamily{
            "wp_high_first", "regime s >= 3/4; ticks at unit eps scale",
            {er(1, 1) - eps, zero, zero, -er(1, 4) - eps, half_p, half_p},
            {-one, one, one, zero, zero, zero},
            {Rational(3, 4), Rational(1), Rational(2)}});
        // High-regularity regime, second factor: s0 = s+.
        v.push_back(TupleFamily{
            "wp_high_second", "regime s >= 3/4; ticks at unit eps scale",
            {eps, zero, zero, er(1, 4) + eps, half_p, half_mm},
            {one, one, -one, zero, zero, zero},
            {Rational(3, 4), Rational(1), Rational(2)}});
        // Uniqueness estimate, first factor (constant family):
        // s0 = 1/2, b0 = 0, s1 = 0, b1 = 1/2+, s2 = 1/4 + eps/4, b2 = 1/4 + eps.
        v.push_back(TupleFamily{
            "uniq_first", "fixed tuple; interpolation eps full scale, s2 carries eps/4",
            {er(1, 2), zero, ExtendedRational{Rational(1, 4), Rational(1, 4)}, zero, half_p,
             er(1, 4) + eps},
            {zero, zero, zero, zero, zero, zero},
            {Rational(0)}});
        // Uniqueness estimate, second factor: b2 = 1/2-- with ticks of eps/4
        // ("--" = two ticks = eps/2); condition #5 forces the ticks below
        // (5/4) eps here, so the unit scale of the other families would fail.
        v.push_back(TupleFamily{
            "uniq_second", "fixed tuple; b2 = 1/2 - eps/2, ticks at eps/4 scale",
            {er(1, 2), ExtendedRational{Rational(1, 4), Rational(1, 4)}, zero, zero,
             er(1, 4) + eps, ExtendedRational{Rational(1, 2), Rational(-1, 2)}},
            {zero, zero, zero, zero, zero, zero},
            {Rational(0)}});
        return v;
    }();
    return fams;
}

struct CorpusEntryResult {
    std::string family;
    Rational s;
    ConditionReport report;
};

struct CorpusReport {
    std::vector<CorpusEntryResult> entries;
    bool all_admissible() const {
        for (const auto& e : entries)
            if (!e.report.admissible()) return false;
        return true;
    }
};

// Every corpus tuple, instantiated over its documented regime samples, must
// evaluate admissible; a failure is a regression.
inline CorpusReport verify_builtin_corpus() {
    CorpusReport r;
    for (const auto& fam : builtin_families())
        for (const auto& s : fam.sample_s)
            r.entries.push_back({fam.name, s, evaluate_conditions(fam.at(s))});
    return r;
}

// ---------------------------------------------------------------------------
// Exact threshold solving for affine families.

struct ThresholdResult {
    enum class Kind { value, unbounded_below, empty };
    Kind kind = Kind::empty;
    Rational threshold{0};        // infimum of the admissible set (Kind::value)
    bool attained = false;        // whether the infimum itself is admissible
    std::vector<std::string> binding;  // conditions whose lower edge equals it
};

namespace detail {

struct Interval {
    bool empty = false;
    std::optional<Rational> lo;  // nullopt = -infinity
    bool lo_closed = false;
    std::optional<Rational> hi;  // nullopt = +infinity
    bool hi_closed = false;

    static Interval all() { return {}; }
    static Interval none() {
        Interval i;
        i.empty = true;
        return i;
    }

    void intersect(const Interval& o) {
        if (empty || o.empty) {
            empty = true;
            return;
        }
        if (o.lo) {
            if (!lo || *o.lo > *lo) {
                lo = o.lo;
                lo_closed = o.lo_closed;
            } else if (*o.lo == *lo) {
                lo_closed = lo_closed && o.lo_closed;
            }
        }
        if (o.hi) {
            if (!hi || *o.hi < *hi) {
                hi = o.hi;
                hi_closed = o.hi_closed;
            } else if (*o.hi == *hi) {
                hi_closed = hi_closed && o.hi_closed;
            }
        }
        if (lo && hi && (*lo > *hi || (*lo == *hi && !(lo_closed && hi_closed)))) empty = true;
    }
};

// Solution set in s of the affine lexicographic inequality
// (Ac + As s) + (Bc + Bs s) eps  >(=)  0.
inline Interval solve_affine(const Rational& Ac, const Rational& As, const Rational& Bc,
                             const Rational& Bs, bool strict) {
    const Rational zero(0);
    if (As != zero) {
        const Rational x0 = -Ac / As;
        const Rational Bx = Bc + Bs * x0;
        const bool incl = strict ? Bx > zero : Bx >= zero;
        Interval i;
        if (As > zero) {
            i.lo = x0;
            i.lo_closed = incl;
        } else {
            i.hi = x0;
            i.hi_closed = incl;
        }
        return i;
    }
    if (Ac > zero) return Interval::all();
    if (Ac < zero) return Interval::none();
    // A identically zero: decided by the eps part.
    if (Bs != zero) {
        const Rational y0 = -Bc / Bs;
        Interval i;
        if (Bs > zero) {
            i.lo = y0;
            i.lo_closed = !strict;
        } else {
            i.hi = y0;
            i.hi_closed = !strict;
        }
        return i;
    }
    if (Bc > zero || (!strict && Bc == zero)) return Interval::all();
    return Interval::none();
}

struct AffineER {
    // value(s) = (Ac + As s) + (Bc + Bs s) eps
    Rational Ac{0}, As{0}, Bc{0}, Bs{0};

    friend AffineER operator+(const AffineER& a, const AffineER& b) {
        return {a.Ac + b.Ac, a.As + b.As, a.Bc + b.Bc, a.Bs + b.Bs};
    }
    friend AffineER operator-(const AffineER& a, const AffineER& b) {
        return {a.Ac - b.Ac, a.As - b.As, a.Bc - b.Bc, a.Bs - b.Bs};
    }
    AffineER operator-() const { return {-Ac, -As, -Bc, -Bs}; }
    friend AffineER operator*(const Rational& c, const AffineER& a) {
        return {c * a.Ac, c * a.As, c * a.Bc, c * a.Bs};
    }
    static AffineER constant(const Rational& c) { return {c, Rational(0), Rational(0), Rational(0)}; }
    static AffineER from(const ExtendedRational& base, const ExtendedRational& slope) {
        return {base.q, slope.q, base.k, slope.k};
    }
};

struct AffineTuple {
    AffineER s0, s1, s2, b0, b1, b2;
};

// One conjunct of a condition: margin(s) affine, with strictness.
struct Conjunct {
    const char* condition;
    AffineER margin;
    bool strict;
};

inline std::vector<Conjunct> conjuncts_for_family(const TupleFamily& fam) {
    const AffineTuple t{AffineER::from(fam.base.s0, fam.slope.s0),
                        AffineER::from(fam.base.s1, fam.slope.s1),
                        AffineER::from(fam.base.s2, fam.slope.s2),
                        AffineER::from(fam.base.b0, fam.slope.b0),
                        AffineER::from(fam.base.b1, fam.slope.b1),
                        AffineER::from(fam.base.b2, fam.slope.b2)};
    const Rational two(2);
    auto c = [](const Rational& num, const Rational& den) { return AffineER::constant(num / den); };
    const auto& defs = conditions();
    std::vector<Conjunct> out;
    auto add = [&](int id, AffineER m) { out.push_back({defs[static_cast<size_t>(id)].text, m,
                                                        defs[static_cast<size_t>(id)].strict}); };
    const AffineER ssum = t.s0 + t.s1 + t.s2;
    add(0, t.b0 + t.b1 + t.b2 - c(Rational(1), Rational(2)));
    add(1, t.b0 + t.b1);
    add(2, t.b0 + t.b2);
    add(3, t.b1 + t.b2);
    add(4, ssum + t.b0 + t.b1 + t.b2 - c(Rational(3), Rational(2)));
    add(5, ssum + t.b0 + t.b1 - AffineER::constant(Rational(1)));
    add(6, ssum + t.b0 + t.b2 - AffineER::constant(Rational(1)));
    add(7, ssum + t.b1 + t.b2 - AffineER::constant(Rational(1)));
    add(8, ssum + t.b0 - c(Rational(1), Rational(2)));
    add(9, ssum + t.b1 - c(Rational(1), Rational(2)));
    add(10, ssum + t.b2 - c(Rational(1), Rational(2)));
    add(11, ssum - c(Rational(3), Rational(4)));
    add(12, t.s0 + t.b0 + two * t.s1 + two * t.s2 - AffineER::constant(Rational(1)));
    add(13, two * t.s0 + t.s1 + t.b1 + two * t.s2 - AffineER::constant(Rational(1)));
    add(14, two * t.s0 + two * t.s1 + t.s2 + t.b2 - AffineER::constant(Rational(1)));
    // "x >(=) max(0, -b)" splits into the conjunction "x >(=) 0 and x + b >(=) 0".
    add(15, t.s1 + t.s2);
    add(15, t.s1 + t.s2 + t.b0);
    add(16, t.s0 + t.s2);
    add(16, t.s0 + t.s2 + t.b1);
    add(17, t.s0 + t.s1);
    add(17, t.s0 + t.s1 + t.b2);
    return out;
}

}  // namespace detail

/** Exact infimum of the admissible set of an affine family, with the set of
 * conditions binding at it. Closed form per condition, no search. */
inline ThresholdResult threshold_sweep(const TupleFamily& fam) {
    const auto conj = detail::conjuncts_for_family(fam);
    detail::Interval acc = detail::Interval::all();
    std::vector<std::pair<const char*, detail::Interval>> pieces;
    for (const auto& cj : conj) {
        detail::Interval i =
            detail::solve_affine(cj.margin.Ac, cj.margin.As, cj.margin.Bc, cj.margin.Bs, cj.strict);
        pieces.emplace_back(cj.condition, i);
        acc.intersect(i);
    }
    ThresholdResult r;
    if (acc.empty) {
        r.kind = ThresholdResult::Kind::empty;
        return r;
    }
    if (!acc.lo) {
        r.kind = ThresholdResult::Kind::unbounded_below;
        return r;
    }
    r.kind = ThresholdResult::Kind::value;
    r.threshold = *acc.lo;
    r.attained = acc.lo_closed;
    for (const auto& [name, itv] : pieces) {
        if (itv.empty || !itv.lo || *itv.lo != r.threshold) continue;
        if (std::find(r.binding.begin(), r.binding.end(), name) == r.binding.end())
            r.binding.push_back(name);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Tuple files: one tuple per line, six whitespace-separated fields in the
// order s0 s1 s2 b0 b1 b2, each "p/q" or "p/q+kε" with integer p, q, k.
// Comment lines start with '#'.

inline ExponentTuple parse_tuple_line(const std::string& line) {
    std::istringstream is(line);
    std::array<std::string, 6> f;
    for (auto& s : f)
        if (!(is >> s)) throw ConfigError("tuple line needs six fields: '" + line + "'");
    std::string extra;
    if (is >> extra) throw ConfigError("tuple line has trailing fields: '" + line + "'");
    return {parse_extended_rational(f[0]), parse_extended_rational(f[1]),
            parse_extended_rational(f[2]), parse_extended_rational(f[3]),
            parse_extended_rational(f[4]), parse_extended_rational(f[5])};
}

inline std::vector<ExponentTuple> read_tuple_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tuple file: " + path);
    std::vector<ExponentTuple> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        const auto p = trimmed.find_first_not_of(" \t\r");
        if (p == std::string::npos || trimmed[p] == '#') continue;
        out.push_back(parse_tuple_line(line));
    }
    return out;
}

// Writes tuples with integer epsilon coefficients: the verdicts are invariant
// under a positive rescaling of all k in one tuple, so each line is scaled by
// the lcm of its k denominators.
inline std::string format_tuple_line(const ExponentTuple& t) {
    long long l = 1;
    for (const auto* e : {&t.s0, &t.s1, &t.s2, &t.b0, &t.b1, &t.b2})
        l = std::lcm(l, e->k.denominator());
    const Rational scale(l);
    std::string out;
    bool first = true;
    for (const auto* e : {&t.s0, &t.s1, &t.s2, &t.b0, &t.b1, &t.b2}) {
        if (!first) out += ' ';
        first = false;
        out += to_string(ExtendedRational{e->q, scale * e->k});
    }
    return out;
}

}  // namespace csd::admissibility
