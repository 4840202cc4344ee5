#include "bsmod/periodic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <queue>

namespace bsmod {

using nlohmann::json;

PeriodicFunction PeriodicFunction::constant(double c) { return from_trig(TrigPoly(c)); }

PeriodicFunction PeriodicFunction::from_trig(TrigPoly t) {
    PeriodicFunction f;
    f.trig_ = std::move(t);
    return f;
}

PeriodicFunction PeriodicFunction::from_piecewise(PiecewisePoly p) {
    PeriodicFunction f;
    f.pw_ = std::move(p);
    return f;
}

PeriodicFunction PeriodicFunction::square_wave(int n) {
    PeriodicFunction f;
    f.pw_ = PiecewisePoly::square_wave(n);
    f.square_wave_n_ = n;
    return f;
}

PeriodicFunction PeriodicFunction::from_closure(std::function<double(double)> fn, double lipschitz_hint) {
    PeriodicFunction f;
    f.closures_.push_back({std::move(fn), lipschitz_hint});
    return f;
}

double PeriodicFunction::operator()(double t) const {
    double x = t - std::floor(t);
    if (x >= 1.0) x = 0.0;
    double v = 0.0;
    if (trig_) v += trig_->eval(x);
    if (pw_) v += pw_->eval(x);
    for (const auto& c : closures_) {
        double cv = c.fn(x);
        if (!std::isfinite(cv)) throw EvalError("closure evaluation returned a non-finite value");
        v += cv;
    }
    return v;
}

PeriodicFunction PeriodicFunction::operator+(const PeriodicFunction& o) const {
    PeriodicFunction r;
    if (trig_ && o.trig_) r.trig_ = *trig_ + *o.trig_;
    else if (trig_) r.trig_ = trig_;
    else r.trig_ = o.trig_;
    if (pw_ && o.pw_) r.pw_ = *pw_ + *o.pw_;
    else if (pw_) r.pw_ = pw_;
    else r.pw_ = o.pw_;
    r.closures_ = closures_;
    r.closures_.insert(r.closures_.end(), o.closures_.begin(), o.closures_.end());
    return r;
}

PeriodicFunction PeriodicFunction::operator-(const PeriodicFunction& o) const { return *this + o.scaled(-1.0); }

PeriodicFunction PeriodicFunction::scaled(double c) const {
    PeriodicFunction r;
    if (trig_) r.trig_ = trig_->scaled(c);
    if (pw_) r.pw_ = pw_->scaled(c);
    for (const auto& cl : closures_) {
        auto fn = cl.fn;
        r.closures_.push_back({[fn, c](double t) { return c * fn(t); }, std::abs(c) * cl.lipschitz_hint});
    }
    return r;
}

PeriodicFunction PeriodicFunction::shifted(double s) const {
    PeriodicFunction r;
    if (trig_) r.trig_ = trig_->shifted(s);
    if (pw_) r.pw_ = pw_->shifted(s);
    for (const auto& cl : closures_) {
        auto fn = cl.fn;
        r.closures_.push_back({[fn, s](double t) {
                                   double x = t - s;
                                   x -= std::floor(x);
                                   return fn(x);
                               },
                               cl.lipschitz_hint});
    }
    return r;
}

PeriodicFunction PeriodicFunction::second_difference(double u) const {
    PeriodicFunction r;
    if (trig_) r.trig_ = trig_->second_difference(u);
    if (pw_) r.pw_ = pw_->second_difference(u);
    for (const auto& cl : closures_) {
        auto fn = cl.fn;
        r.closures_.push_back({[fn, u](double t) {
                                   auto wrap = [&](double x) {
                                       x -= std::floor(x);
                                       return fn(x);
                                   };
                                   return wrap(t + u) - 2.0 * wrap(t) + wrap(t - u);
                               },
                               4.0 * cl.lipschitz_hint});
    }
    return r;
}

bool PeriodicFunction::differentiable(int order) const {
    if (!closures_.empty()) return false;
    if (pw_ && pw_->continuity() < order - 1) return false;
    return true;
}

PeriodicFunction PeriodicFunction::derivative(int order) const {
    if (!closures_.empty()) throw UnsupportedOperation("derivative: sampled closures are not differentiable");
    PeriodicFunction r;
    if (trig_) r.trig_ = trig_->derivative(order);
    if (pw_) r.pw_ = pw_->derivative(order); // throws UnsupportedOperation if continuity too low
    return r;
}

PeriodicFunction PeriodicFunction::closure_part() const {
    PeriodicFunction r;
    r.closures_ = closures_;
    return r;
}

std::vector<Jump> PeriodicFunction::jumps() const { return pw_ ? pw_->jumps() : std::vector<Jump>{}; }

double PeriodicFunction::lipschitz_bound() const {
    double L = 0.0;
    if (trig_) L += trig_->deriv_abs_sum(1);
    if (pw_) L += pw_->lipschitz_bound();
    for (const auto& c : closures_) L += c.lipschitz_hint;
    return L;
}

namespace {

/// joint branch-and-bound over |p + tau| on the pieces of p
CertifiedValue mixed_sup(const PiecewisePoly& pw, const TrigPoly& tr, double tol) {
    const double B2t = tr.deriv_abs_sum(2);
    double slop = 2.2e-16 * (tr.deriv_abs_sum(0) + tr.deriv_abs_sum(1));

    struct Seg {
        double a, b, ub;
        const poly::Coeffs* c;
        double base; // local coord origin of the piece
        double b3;   // third-derivative bound of the piece polynomial
        bool operator<(const Seg& o) const { return ub < o.ub; }
    };
    double lo = 0.0;
    auto bound = [&](Seg& s) {
        double m = 0.5 * (s.a + s.b), r = 0.5 * (s.b - s.a);
        double p, dp, ddp;
        poly::eval012(*s.c, m - s.base, p, dp, ddp);
        double v = p + tr.eval(m);
        double dv = dp + tr.eval_derivative(m);
        lo = std::max(lo, std::abs(v) - slop);
        s.ub = std::abs(v) + r * std::abs(dv) + 0.5 * r * r * (std::abs(ddp) + B2t) + s.b3 * r * r * r / 6.0 + slop;
    };

    std::priority_queue<Seg> pq;
    const auto& bp = pw.breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) {
        double A = bp[i], B = (i + 1 < bp.size()) ? bp[i + 1] : 1.0;
        const poly::Coeffs& c = pw.pieces()[i];
        double w = B - A;
        double b3 = poly::third_derivative_bound(c, w);
        // endpoint (one-sided limit) values
        lo = std::max(lo, std::abs(poly::eval(c, 0.0) + tr.eval(A)) - slop);
        lo = std::max(lo, std::abs(poly::eval(c, w) + tr.eval(B)) - slop);
        int parts = std::max(2, 2 * tr.degree());
        for (int k = 0; k < parts; ++k) {
            Seg s{A + w * k / parts, A + w * (k + 1) / parts, 0.0, &c, A, b3};
            bound(s);
            pq.push(s);
        }
    }
    double hi = lo;
    long iters = 0;
    while (!pq.empty()) {
        Seg s = pq.top();
        pq.pop();
        hi = std::max(lo, s.ub);
        if (s.ub <= lo + tol) break;
        if (++iters > 400000)
            throw ToleranceNotMet("sup_norm: mixed refinement budget exhausted", CertifiedValue{lo, hi, Method::grid_refine});
        double m = 0.5 * (s.a + s.b);
        Seg l{s.a, m, 0.0, s.c, s.base, s.b3}, r{m, s.b, 0.0, s.c, s.base, s.b3};
        bound(l);
        bound(r);
        pq.push(l);
        pq.push(r);
    }
    if (pq.empty()) hi = lo;
    return {lo, std::max(hi, lo), Method::grid_refine};
}

} // namespace

CertifiedValue PeriodicFunction::sup_norm(double tol) const {
    if (!closures_.empty()) {
        // sampled model: grid + golden-section refinement, certified only
        // under the Lipschitz hint
        double L = lipschitz_bound();
        const int N = 4096;
        double best = 0.0;
        std::vector<double> vals(N);
        for (int i = 0; i < N; ++i) {
            vals[i] = std::abs((*this)(static_cast<double>(i) / N));
            best = std::max(best, vals[i]);
        }
        // refine the top candidates by golden-section search on |f|
        const double gr = 0.6180339887498949;
        std::vector<int> idx(N);
        for (int i = 0; i < N; ++i) idx[i] = i;
        std::partial_sort(idx.begin(), idx.begin() + 8, idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
        for (int k = 0; k < 8; ++k) {
            double a = (idx[k] - 1.0) / N, b = (idx[k] + 1.0) / N;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            double f1 = std::abs((*this)(x1)), f2 = std::abs((*this)(x2));
            for (int it = 0; it < 60; ++it) {
                if (f1 < f2) {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a); f2 = std::abs((*this)(x2));
                } else {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a); f1 = std::abs((*this)(x1));
                }
            }
            best = std::max(best, std::max(f1, f2));
        }
        double hi = best + L / (2.0 * N);
        if (hi - best > tol && hi - best > 1e-6 * (1.0 + best))
            throw ToleranceNotMet("sup_norm: closure model cannot reach tolerance", CertifiedValue{best, hi, Method::grid_refine});
        return {best, hi, Method::grid_refine};
    }
    if (pw_ && trig_ && trig_->degree() > 0) return mixed_sup(*pw_, *trig_, tol);
    if (pw_) {
        CertifiedValue s = pw_->sup_norm();
        if (trig_) { // constant trig part: fold into the pieces
            PiecewisePoly shiftedpw = *pw_ + PiecewisePoly::constant(trig_->constant_term());
            s = shiftedpw.sup_norm();
        }
        return s;
    }
    if (trig_) return trig_->sup_norm(tol);
    return CertifiedValue::point(0.0, Method::exact);
}

CertifiedValue sup_norm_diff(const PeriodicFunction& a, const PeriodicFunction& b, double tol) {
    return (a - b).sup_norm(tol);
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

json trig_doc(const TrigPoly& t) {
    json j;
    j["repr"] = "trig";
    j["a0"] = t.constant_term();
    json c = json::array(), s = json::array();
    for (int k = 1; k <= t.size(); ++k) {
        c.push_back(t.cos_coeff(k));
        s.push_back(t.sin_coeff(k));
    }
    j["cos"] = c;
    j["sin"] = s;
    return j;
}

json pw_doc(const PiecewisePoly& p) {
    json j;
    j["repr"] = "piecewise";
    j["continuity"] = p.continuity();
    j["breakpoints"] = p.breakpoints();
    json pieces = json::array();
    for (const auto& c : p.pieces()) pieces.push_back(c);
    j["pieces"] = pieces;
    return j;
}

PeriodicFunction parse_doc(const json& j) {
    if (!j.contains("repr")) throw std::invalid_argument("function document: missing 'repr'");
    std::string repr = j.at("repr").get<std::string>();
    if (repr == "trig") {
        std::vector<double> c = j.value("cos", std::vector<double>{});
        std::vector<double> s = j.value("sin", std::vector<double>{});
        return PeriodicFunction::from_trig(TrigPoly(j.value("a0", 0.0), std::move(c), std::move(s)));
    }
    if (repr == "const") return PeriodicFunction::constant(j.at("value").get<double>());
    if (repr == "piecewise") {
        std::vector<double> bp = j.at("breakpoints").get<std::vector<double>>();
        std::vector<poly::Coeffs> pieces;
        for (const auto& e : j.at("pieces")) pieces.push_back(e.get<poly::Coeffs>());
        return PeriodicFunction::from_piecewise(PiecewisePoly(std::move(bp), std::move(pieces), j.value("continuity", -1)));
    }
    if (repr == "squarewave") return PeriodicFunction::square_wave(j.at("n").get<int>());
    if (repr == "sum") {
        PeriodicFunction acc;
        for (const auto& e : j.at("terms")) acc = acc + parse_doc(e);
        return acc;
    }
    if (repr == "scale") return parse_doc(j.at("inner")).scaled(j.at("factor").get<double>());
    if (repr == "shift") return parse_doc(j.at("inner")).shifted(j.at("by").get<double>());
    throw std::invalid_argument("function document: unknown repr '" + repr + "'");
}

} // namespace

std::string PeriodicFunction::to_json() const {
    if (!closures_.empty()) throw UnsupportedOperation("to_json: closures are not serializable");
    if (square_wave_n_) {
        json j;
        j["repr"] = "squarewave";
        j["n"] = *square_wave_n_;
        return j.dump();
    }
    if (trig_ && pw_) {
        json j;
        j["repr"] = "sum";
        j["terms"] = json::array({pw_doc(*pw_), trig_doc(*trig_)});
        return j.dump();
    }
    if (pw_) return pw_doc(*pw_).dump();
    return trig_doc(trig_ ? *trig_ : TrigPoly(0.0)).dump();
}

PeriodicFunction PeriodicFunction::parse_json(const std::string& doc) {
    json j = json::parse(doc);
    return parse_doc(j);
}

} // namespace bsmod
