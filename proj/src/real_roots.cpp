#include "osclab/real_roots.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace osclab {

UPoly primitive_part(const UPoly& p) {
    if (p.is_zero()) return {};
    mpz_class den = 1;
    for (const auto& c : p.coeffs()) den = lcm(den, c.den());
    std::vector<mpz_class> ints;
    ints.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) {
        mpq_class scaled = c.raw() * den;
        ints.push_back(scaled.get_num());
    }
    mpz_class g = 0;
    for (const auto& v : ints) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (ints.back() < 0) g = -g;
    std::vector<Rational> out;
    out.reserve(ints.size());
    for (const auto& v : ints) out.emplace_back(v, g);
    return UPoly(std::move(out));
}

RealRoot::RealRoot(UPoly defining, Rational lo, Rational hi)
    : def_(std::move(defining)), lo_(std::move(lo)), hi_(std::move(hi)) {}

RealRoot RealRoot::exact_value(const Rational& v) {
    RealRoot r(UPoly::linear_root(v), v, v);
    r.exact_ = v;
    return r;
}

void RealRoot::refine(const Rational& w) {
    if (exact_) return;
    const int slo = def_.sign_at(lo_);
    while (hi_ - lo_ > w) {
        const Rational mid = (lo_ + hi_) / Rational(2);
        const int s = def_.sign_at(mid);
        if (s == 0) {
            exact_ = mid;
            lo_ = hi_ = mid;
            return;
        }
        if (s == slo) lo_ = mid; else hi_ = mid;
    }
}

double RealRoot::approx() const {
    if (exact_) return exact_->to_double();
    RealRoot copy = *this;
    copy.refine(Rational(mpz_class(1), mpz_class(1) << 64));
    return ((copy.lo_ + copy.hi_) / Rational(2)).to_double();
}

int RealRoot::compare(const Rational& x) const {
    if (exact_) {
        const auto c = *exact_ <=> x;
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (x <= lo_) return 1;
    if (x >= hi_) return -1;
    const int s = def_.sign_at(x);
    if (s == 0) return 0;
    return s == def_.sign_at(lo_) ? 1 : -1;
}

std::string RealRoot::str() const {
    if (exact_) return exact_->str();
    std::ostringstream os;
    os << "root of " << def_.str() << " in (" << lo_ << ", " << hi_ << ")";
    return os.str();
}

namespace {

void isolate_rec(const std::vector<UPoly>& chain, const Rational& lo, const Rational& hi, int n,
                 std::vector<std::pair<Rational, Rational>>& out) {
    if (n == 0) return;
    if (n == 1) {
        out.emplace_back(lo, hi);
        return;
    }
    const Rational mid = (lo + hi) / Rational(2);
    const int left = count_roots(chain, lo, mid);
    isolate_rec(chain, lo, mid, left, out);
    isolate_rec(chain, mid, hi, n - left, out);
}

}  // namespace

std::vector<RealRoot> isolate_real_roots(const UPoly& squarefree) {
    std::vector<RealRoot> roots;
    if (squarefree.degree() < 1) return roots;
    const UPoly f = primitive_part(squarefree);
    const auto chain = sturm_chain(f);
    const Rational bound = root_bound(f);
    std::vector<std::pair<Rational, Rational>> intervals;
    isolate_rec(chain, -bound, bound, count_roots(chain, -bound, bound), intervals);

    // Distinct rationals with denominators <= |lc| differ by at least 1/lc^2, so in a
    // narrower interval the simplest rational is the only possible rational root.
    const Rational lc = f.leading().abs();
    const Rational width = Rational(1) / (Rational(2) * lc * lc);
    for (auto& [lo, hi] : intervals) {
        Rational a = lo, b = hi;
        if (f.sign_at(b) == 0) {
            roots.push_back(RealRoot::exact_value(b));
            continue;
        }
        // a may be a neighbouring root; shrink until the sign test brackets ours.
        while (f.sign_at(a) == 0) {
            const Rational mid = (a + b) / Rational(2);
            if (count_roots(chain, mid, b) == 1) a = mid; else b = mid;
            if (f.sign_at(b) == 0) break;
        }
        if (f.sign_at(b) == 0) {
            roots.push_back(RealRoot::exact_value(b));
            continue;
        }
        RealRoot r(f, a, b);
        r.refine(width);
        if (r.is_rational()) {
            roots.push_back(std::move(r));
            continue;
        }
        const Rational s = simplest_between(r.lo(), r.hi());
        if (s > r.lo() && s <= r.hi() && f.sign_at(s) == 0)
            roots.push_back(RealRoot::exact_value(s));
        else
            roots.push_back(std::move(r));
    }
    return roots;
}

std::vector<RootWithMultiplicity> real_roots_with_multiplicity(const UPoly& q) {
    if (q.is_zero()) throw std::domain_error("real roots of the zero polynomial");
    std::vector<RootWithMultiplicity> out;
    for (const auto& sf : square_free_decomposition(q))
        for (auto& r : isolate_real_roots(sf.factor)) out.push_back({std::move(r), sf.multiplicity});
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.multiplicity != y.multiplicity) return x.multiplicity > y.multiplicity;
        return x.root.approx() < y.root.approx();
    });
    return out;
}

}  // namespace osclab
