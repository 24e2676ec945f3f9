#include "osclab/cubature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>
#include <queue>

namespace osclab {

double Rect::diameter() const { return std::hypot(width(), height()); }

void ComplexSum::step(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
}

void ComplexSum::add(std::complex<double> v) {
    step(re_, cre_, v.real());
    step(im_, cim_, v.imag());
}

namespace {

struct Rule {
    std::array<double, 15> t{}, wk{}, wg{};
};

const Rule& gk_rule() {
    static const Rule rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& ka = gauss_kronrod<double, 15>::abscissa();
        const auto& kw = gauss_kronrod<double, 15>::weights();
        const auto& ga = gauss<double, 7>::abscissa();
        const auto& gw = gauss<double, 7>::weights();
        Rule r;
        auto gweight = [&](double x) {
            for (std::size_t i = 0; i < ga.size(); ++i)
                if (std::abs(ga[i] - x) < 1e-14) return gw[i];
            return 0.0;
        };
        std::size_t n = 0;
        for (std::size_t i = ka.size(); i-- > 1;) {
            r.t[n] = -ka[i], r.wk[n] = kw[i], r.wg[n] = gweight(ka[i]);
            ++n;
        }
        for (std::size_t i = 0; i < ka.size(); ++i) {
            r.t[n] = ka[i], r.wk[n] = kw[i], r.wg[n] = gweight(ka[i]);
            ++n;
        }
        return r;
    }();
    return rule;
}

struct Cell {
    Rect r;
    std::complex<double> q;
    double ex, ey;
    int depth;
    bool active;
    double err() const { return ex + ey; }
};

Cell evaluate(const Integrand2& f, const Rect& r, int depth) {
    const Rule& R = gk_rule();
    const double cx = 0.5 * (r.x0 + r.x1), hx = 0.5 * r.width();
    const double cy = 0.5 * (r.y0 + r.y1), hy = 0.5 * r.height();
    std::complex<double> kk, gk, kg;
    for (std::size_t i = 0; i < 15; ++i) {
        const double x = cx + hx * R.t[i];
        std::complex<double> colk, colg;
        for (std::size_t j = 0; j < 15; ++j) {
            const std::complex<double> v = f(x, cy + hy * R.t[j]);
            colk += R.wk[j] * v;
            colg += R.wg[j] * v;
        }
        kk += R.wk[i] * colk;
        gk += R.wg[i] * colk;
        kg += R.wk[i] * colg;
    }
    const double area = hx * hy;
    return {r, kk * area, std::abs(kk - gk) * area, std::abs(kk - kg) * area, depth, true};
}

}  // namespace

CubatureResult adaptive_cubature(const Integrand2& f, const std::vector<Rect>& initial, const CubatureOptions& opt) {
    std::vector<Cell> cells;
    cells.reserve(initial.size() * 4);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    CubatureResult res;

    auto push = [&](const Rect& r, int depth) {
        cells.push_back(evaluate(f, r, depth));
        res.evaluations += 225;
        heap.push({cells.back().err(), cells.size() - 1});
    };
    auto totals = [&](std::complex<double>& q, double& e) {
        ComplexSum s;
        double err = 0.0;
        for (const Cell& c : cells)
            if (c.active) s.add(c.q), err += c.err();
        q = s.value();
        e = err;
    };

    for (const Rect& r : initial) push(r, 0);
    std::complex<double> q;
    double err;
    totals(q, err);
    long active = static_cast<long>(cells.size());
    bool capped = false;
    long since_sync = 0;
    while (!heap.empty()) {
        const double tol = std::max(opt.target_rel * std::abs(q), opt.abs_floor);
        if (err <= tol) break;
        if (active >= opt.max_cells) {
            res.reliable = false;
            res.note = "cell cap reached";
            break;
        }
        const std::size_t idx = heap.top().second;
        heap.pop();
        const Cell c = cells[idx];
        if (c.depth >= opt.max_depth) {
            capped = true;
            continue;  // stays active, its error keeps counting
        }
        cells[idx].active = false;
        const bool sx = c.ex >= 0.25 * c.ey, sy = c.ey >= 0.25 * c.ex;
        const double mx = 0.5 * (c.r.x0 + c.r.x1), my = 0.5 * (c.r.y0 + c.r.y1);
        std::vector<Rect> kids;
        if (sx && sy) {
            kids = {{c.r.x0, mx, c.r.y0, my}, {mx, c.r.x1, c.r.y0, my}, {c.r.x0, mx, my, c.r.y1}, {mx, c.r.x1, my, c.r.y1}};
        } else if (sx) {
            kids = {{c.r.x0, mx, c.r.y0, c.r.y1}, {mx, c.r.x1, c.r.y0, c.r.y1}};
        } else {
            kids = {{c.r.x0, c.r.x1, c.r.y0, my}, {c.r.x0, c.r.x1, my, c.r.y1}};
        }
        q -= c.q;
        err -= c.err();
        for (const Rect& k : kids) {
            push(k, c.depth + 1);
            q += cells.back().q;
            err += cells.back().err();
        }
        active += static_cast<long>(kids.size()) - 1;
        if (++since_sync == 256) {
            totals(q, err);
            since_sync = 0;
        }
    }
    totals(q, err);
    res.value = q;
    res.error = err;
    res.cells = active;
    if (err > std::max(opt.target_rel * std::abs(q), opt.abs_floor)) {
        res.reliable = false;
        if (res.note.empty()) res.note = capped ? "subdivision depth cap reached" : "tolerance not met";
    }
    return res;
}

std::complex<double> composite_gauss(const Integrand2& f, const Rect& r, int nx, int ny) {
    using boost::math::quadrature::gauss;
    const auto& a = gauss<double, 20>::abscissa();
    const auto& w = gauss<double, 20>::weights();
    std::vector<double> t, wt;
    for (std::size_t i = 0; i < a.size(); ++i) {
        t.push_back(a[i]), wt.push_back(w[i]);
        if (a[i] != 0.0) t.push_back(-a[i]), wt.push_back(w[i]);
    }
    const double hx = r.width() / nx, hy = r.height() / ny;
    ComplexSum s;
    for (int i = 0; i < nx; ++i) {
        const double cx = r.x0 + (i + 0.5) * hx;
        for (int j = 0; j < ny; ++j) {
            const double cy = r.y0 + (j + 0.5) * hy;
            std::complex<double> acc;
            for (std::size_t a1 = 0; a1 < t.size(); ++a1)
                for (std::size_t a2 = 0; a2 < t.size(); ++a2)
                    acc += wt[a1] * wt[a2] * f(cx + 0.5 * hx * t[a1], cy + 0.5 * hy * t[a2]);
            s.add(acc * (0.25 * hx * hy));
        }
    }
    return s.value();
}

}  // namespace osclab
