#include "occtrack/seqnet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "occtrack/losses.hpp"

namespace occtrack {

namespace {

/// Per-frame displacements are tiny fractions of the field; feeding them in
/// raw leaves the recurrent activations (and every gradient) near zero. A
/// fixed input gain keeps the delta features at a scale the gates respond
/// to. Applied symmetrically on input and output, so it is invisible in the
/// pixel-space interface.
constexpr double kDeltaGain = 50.0;

struct Layout {
    int h = 0;
    int z = 0;
    int in = 2;
    int out = 1;
    size_t we = 0, be = 0, wx = 0, wh = 0, bg = 0, wz = 0, wo = 0, bo = 0, total = 0;
};

Layout layout_of(NetRole role, int hidden, int noise_dim) {
    Layout l;
    l.h = hidden;
    l.z = noise_dim;
    l.in = 2;
    l.out = role == NetRole::kGenerator ? 2 : 1;
    const size_t h = static_cast<size_t>(hidden);
    l.we = 0;
    l.be = l.we + h * l.in;
    l.wx = l.be + h;
    l.wh = l.wx + 4 * h * h;
    l.bg = l.wh + 4 * h * h;
    l.wz = l.bg + 4 * h;
    l.wo = l.wz + h * static_cast<size_t>(noise_dim);
    l.bo = l.wo + static_cast<size_t>(l.out) * h;
    l.total = l.bo + l.out;
    return l;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// y += A x with A row-major (rows x cols).
void matvec_acc(const double* a, const double* x, double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* row = a + static_cast<size_t>(r) * cols;
        double s = 0.0;
        for (int c = 0; c < cols; ++c) s += row[c] * x[c];
        y[r] += s;
    }
}

// y += A^T x with A row-major (rows x cols), x of length rows, y of length cols.
void matvec_t_acc(const double* a, const double* x, double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        const double* row = a + static_cast<size_t>(r) * cols;
        const double xv = x[r];
        for (int c = 0; c < cols; ++c) y[c] += row[c] * xv;
    }
}

// A += x (outer) y.
void outer_acc(double* a, const double* x, const double* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        double* row = a + static_cast<size_t>(r) * cols;
        const double xv = x[r];
        for (int c = 0; c < cols; ++c) row[c] += xv * y[c];
    }
}

struct Net {
    Layout l;
    const double* we;
    const double* be;
    const double* wx;
    const double* wh;
    const double* bg;
    const double* wz;
    const double* wo;
    const double* bo;

    explicit Net(const SeqNetParams& p) : l(layout_of(p.role, p.hidden, p.noise_dim)) {
        const double* f = p.flat.data();
        we = f + l.we;
        be = f + l.be;
        wx = f + l.wx;
        wh = f + l.wh;
        bg = f + l.bg;
        wz = f + l.wz;
        wo = f + l.wo;
        bo = f + l.bo;
    }
};

struct GradView {
    double* we;
    double* be;
    double* wx;
    double* wh;
    double* bg;
    double* wz;
    double* wo;
    double* bo;

    GradView(double* f, const Layout& l)
        : we(f + l.we), be(f + l.be), wx(f + l.wx), wh(f + l.wh), bg(f + l.bg), wz(f + l.wz),
          wo(f + l.wo), bo(f + l.bo) {}
};

struct StepTape {
    std::array<double, 2> u{};
    std::vector<double> e, i, f, o, g, c, tc, c_prev, h_prev;
};

void lstm_step(const Net& n, const double* u, std::vector<double>& h, std::vector<double>& c,
               StepTape& t) {
    const int hd = n.l.h;
    t.u = {u[0], u[1]};
    t.h_prev = h;
    t.c_prev = c;
    t.e.assign(n.be, n.be + hd);
    matvec_acc(n.we, u, t.e.data(), hd, n.l.in);
    std::vector<double> a(n.bg, n.bg + 4 * hd);
    matvec_acc(n.wx, t.e.data(), a.data(), 4 * hd, hd);
    matvec_acc(n.wh, h.data(), a.data(), 4 * hd, hd);
    t.i.resize(hd);
    t.f.resize(hd);
    t.o.resize(hd);
    t.g.resize(hd);
    t.c.resize(hd);
    t.tc.resize(hd);
    for (int j = 0; j < hd; ++j) {
        t.i[j] = sigmoid(a[j]);
        t.f[j] = sigmoid(a[hd + j]);
        t.o[j] = sigmoid(a[2 * hd + j]);
        t.g[j] = std::tanh(a[3 * hd + j]);
        t.c[j] = t.f[j] * t.c_prev[j] + t.i[j] * t.g[j];
        t.tc[j] = std::tanh(t.c[j]);
        c[j] = t.c[j];
        h[j] = t.o[j] * t.tc[j];
    }
}

// dh/dc carry the gradient wrt this step's outputs on entry and the previous
// step's on exit. du, when non-null, receives the input gradient.
void lstm_step_backward(const Net& n, const StepTape& t, std::vector<double>& dh,
                        std::vector<double>& dc, double* du, GradView& g) {
    const int hd = n.l.h;
    std::vector<double> da(4 * hd);
    for (int j = 0; j < hd; ++j) {
        const double dout = dh[j] * t.tc[j];
        const double dct = dc[j] + dh[j] * t.o[j] * (1.0 - t.tc[j] * t.tc[j]);
        const double di = dct * t.g[j];
        const double dgg = dct * t.i[j];
        const double df = dct * t.c_prev[j];
        dc[j] = dct * t.f[j];
        da[j] = di * t.i[j] * (1.0 - t.i[j]);
        da[hd + j] = df * t.f[j] * (1.0 - t.f[j]);
        da[2 * hd + j] = dout * t.o[j] * (1.0 - t.o[j]);
        da[3 * hd + j] = dgg * (1.0 - t.g[j] * t.g[j]);
    }
    outer_acc(g.wx, da.data(), t.e.data(), 4 * hd, hd);
    outer_acc(g.wh, da.data(), t.h_prev.data(), 4 * hd, hd);
    for (int j = 0; j < 4 * hd; ++j) g.bg[j] += da[j];
    std::vector<double> de(hd, 0.0);
    matvec_t_acc(n.wx, da.data(), de.data(), 4 * hd, hd);
    std::fill(dh.begin(), dh.end(), 0.0);
    matvec_t_acc(n.wh, da.data(), dh.data(), 4 * hd, hd);
    outer_acc(g.we, de.data(), t.u.data(), hd, n.l.in);
    for (int j = 0; j < hd; ++j) g.be[j] += de[j];
    if (du) {
        du[0] = 0.0;
        du[1] = 0.0;
        matvec_t_acc(n.we, de.data(), du, hd, n.l.in);
    }
}

struct GenTape {
    std::vector<StepTape> enc;
    std::vector<StepTape> dec;
    std::vector<std::vector<double>> dec_h;
    std::vector<double> z;
    double field = 0.0;
};

Trajectory gen_forward(const SeqNetParams& gp, const Trajectory& observed,
                       const std::vector<double>& noise, const GenConfig& cfg, GenTape* tape) {
    gp.validate();
    cfg.validate();
    observed.validate();
    if (gp.role != NetRole::kGenerator) throw std::invalid_argument("generator parameters required");
    if (observed.empty()) throw std::invalid_argument("observed trajectory must be non-empty");
    if (noise.size() != static_cast<size_t>(gp.noise_dim))
        throw std::invalid_argument("noise length must equal noise_dim");
    for (double v : noise) {
        if (!std::isfinite(v)) throw std::invalid_argument("noise must be finite");
    }

    const Net n(gp);
    const int hd = n.l.h;
    const double field = cfg.field_size;
    const size_t m = observed.size();
    std::vector<double> h(hd, 0.0), c(hd, 0.0);
    if (tape) {
        tape->z = noise;
        tape->field = field;
    }

    const double in_scale = kDeltaGain / field;
    std::array<double, 2> u{0.0, 0.0};
    for (size_t t = 0; t + 1 < m; ++t) {
        u = {(observed.points[t + 1].x - observed.points[t].x) * in_scale,
             (observed.points[t + 1].y - observed.points[t].y) * in_scale};
        StepTape st;
        lstm_step(n, u.data(), h, c, st);
        if (tape) tape->enc.push_back(std::move(st));
    }
    if (gp.noise_dim > 0) matvec_acc(n.wz, noise.data(), h.data(), hd, gp.noise_dim);

    Trajectory out;
    std::array<double, 2> q{observed.points.back().x, observed.points.back().y};
    const long last_frame = observed.frame_ids.back();
    const double out_scale = field / kDeltaGain;
    for (int j = 0; j < cfg.n_pred; ++j) {
        StepTape st;
        lstm_step(n, u.data(), h, c, st);
        std::array<double, 2> delta{n.bo[0], n.bo[1]};
        matvec_acc(n.wo, h.data(), delta.data(), 2, hd);
        q[0] += out_scale * delta[0];
        q[1] += out_scale * delta[1];
        u = delta;
        out.push_back({q[0], q[1]}, last_frame + j + 1);
        if (tape) {
            tape->dec.push_back(std::move(st));
            tape->dec_h.push_back(h);
        }
    }
    return out;
}

// dq holds gradients wrt the predicted absolute points, one pair per decode
// step. Accumulates into grad (flat, generator layout).
void gen_backward(const SeqNetParams& gp, const GenTape& tape,
                  const std::vector<std::array<double, 2>>& dq, double* grad) {
    const Net n(gp);
    const int hd = n.l.h;
    GradView g(grad, n.l);
    std::vector<double> dh(hd, 0.0), dc(hd, 0.0);
    std::array<double, 2> dq_acc{0.0, 0.0};
    std::array<double, 2> du_next{0.0, 0.0};
    const double out_scale = tape.field / kDeltaGain;
    for (int j = static_cast<int>(tape.dec.size()) - 1; j >= 0; --j) {
        dq_acc[0] += dq[j][0];
        dq_acc[1] += dq[j][1];
        const std::array<double, 2> ddelta{out_scale * dq_acc[0] + du_next[0],
                                           out_scale * dq_acc[1] + du_next[1]};
        outer_acc(g.wo, ddelta.data(), tape.dec_h[j].data(), 2, hd);
        g.bo[0] += ddelta[0];
        g.bo[1] += ddelta[1];
        matvec_t_acc(n.wo, ddelta.data(), dh.data(), 2, hd);
        lstm_step_backward(n, tape.dec[j], dh, dc, du_next.data(), g);
    }
    if (gp.noise_dim > 0) outer_acc(g.wz, dh.data(), tape.z.data(), hd, gp.noise_dim);
    for (int t = static_cast<int>(tape.enc.size()) - 1; t >= 0; --t)
        lstm_step_backward(n, tape.enc[t], dh, dc, nullptr, g);
}

struct DiscTape {
    std::vector<StepTape> steps;
    std::vector<double> h_final;
    double logit = 0.0;
    double prob = 0.5;
    double field = 0.0;
};

double disc_forward(const SeqNetParams& dp, const Trajectory& traj, double field, DiscTape* tape) {
    dp.validate();
    traj.validate();
    if (dp.role != NetRole::kDiscriminator)
        throw std::invalid_argument("discriminator parameters required");
    if (traj.size() < 2) throw std::invalid_argument("discriminator needs at least two points");
    if (!(field > 0.0) || !std::isfinite(field))
        throw std::invalid_argument("field size must be positive");

    const Net n(dp);
    const int hd = n.l.h;
    const double in_scale = kDeltaGain / field;
    std::vector<double> h(hd, 0.0), c(hd, 0.0);
    for (size_t t = 0; t + 1 < traj.size(); ++t) {
        const std::array<double, 2> u{(traj.points[t + 1].x - traj.points[t].x) * in_scale,
                                      (traj.points[t + 1].y - traj.points[t].y) * in_scale};
        StepTape st;
        lstm_step(n, u.data(), h, c, st);
        if (tape) tape->steps.push_back(std::move(st));
    }
    double logit = n.bo[0];
    matvec_acc(n.wo, h.data(), &logit, 1, hd);
    const double prob = sigmoid(logit);
    if (tape) {
        tape->h_final = h;
        tape->logit = logit;
        tape->prob = prob;
        tape->field = field;
    }
    return prob;
}

// dlogit is the loss gradient at the sigmoid input. dq, when non-null,
// receives gradients wrt the input points (size = point count).
void disc_backward(const SeqNetParams& dp, const DiscTape& tape, double dlogit, double* grad,
                   std::vector<std::array<double, 2>>* dq) {
    const Net n(dp);
    const int hd = n.l.h;
    GradView g(grad, n.l);
    outer_acc(g.wo, &dlogit, tape.h_final.data(), 1, hd);
    g.bo[0] += dlogit;
    std::vector<double> dh(hd, 0.0), dc(hd, 0.0);
    matvec_t_acc(n.wo, &dlogit, dh.data(), 1, hd);
    std::array<double, 2> du{};
    const double in_scale = kDeltaGain / tape.field;
    for (int t = static_cast<int>(tape.steps.size()) - 1; t >= 0; --t) {
        lstm_step_backward(n, tape.steps[t], dh, dc, du.data(), g);
        if (dq) {
            (*dq)[t + 1][0] += du[0] * in_scale;
            (*dq)[t + 1][1] += du[1] * in_scale;
            (*dq)[t][0] -= du[0] * in_scale;
            (*dq)[t][1] -= du[1] * in_scale;
        }
    }
}

double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

bool in_clamp_interior(double p) {
    return p > kProbClamp && p < 1.0 - kProbClamp;
}

void check_probs(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + " batch must be non-empty");
    for (double p : v) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument(std::string(what) + " probabilities must be in [0, 1]");
    }
}

}  // namespace

size_t SeqNetParams::count() const {
    return layout_of(role, hidden, noise_dim).total;
}

void SeqNetParams::validate() const {
    if (hidden < 1) throw std::invalid_argument("hidden size must be at least 1");
    if (noise_dim < 0) throw std::invalid_argument("noise_dim must be non-negative");
    if (role == NetRole::kDiscriminator && noise_dim != 0)
        throw std::invalid_argument("discriminator takes no noise input");
    if (flat.size() != count()) throw std::invalid_argument("parameter vector has the wrong size");
    for (double v : flat) {
        if (!std::isfinite(v)) throw std::invalid_argument("parameters must be finite");
    }
}

SeqNetParams SeqNetParams::zeros(NetRole role, int hidden, int noise_dim) {
    SeqNetParams p;
    p.role = role;
    p.hidden = hidden;
    p.noise_dim = noise_dim;
    p.flat.assign(p.count(), 0.0);
    p.validate();
    return p;
}

SeqNetParams SeqNetParams::random_init(NetRole role, int hidden, int noise_dim,
                                       std::mt19937_64& rng) {
    SeqNetParams p = zeros(role, hidden, noise_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : p.flat) v = dist(rng);
    return p;
}

void GenConfig::validate() const {
    if (n_pred < 1) throw std::invalid_argument("n_pred must be at least 1");
    if (!(field_size > 0.0) || !std::isfinite(field_size))
        throw std::invalid_argument("field size must be positive");
}

Trajectory generator_forward(const SeqNetParams& g, const Trajectory& observed,
                             const std::vector<double>& noise, const GenConfig& cfg) {
    return gen_forward(g, observed, noise, cfg, nullptr);
}

double discriminator_forward(const SeqNetParams& d, const Trajectory& traj, double field_size) {
    return disc_forward(d, traj, field_size, nullptr);
}

GanLossValue gan_loss(const std::vector<double>& d_real, const std::vector<double>& d_fake) {
    check_probs(d_real, "real");
    check_probs(d_fake, "fake");
    GanLossValue v;
    for (double p : d_real) v.d_loss -= std::log(clamp_prob(p)) / d_real.size();
    for (double p : d_fake) {
        v.d_loss -= std::log(1.0 - clamp_prob(p)) / d_fake.size();
        v.g_loss -= std::log(clamp_prob(p)) / d_fake.size();
    }
    return v;
}

GanLossGrad gan_loss_grad(const std::vector<double>& d_real, const std::vector<double>& d_fake) {
    check_probs(d_real, "real");
    check_probs(d_fake, "fake");
    GanLossGrad g;
    const double n = static_cast<double>(d_real.size());
    const double m = static_cast<double>(d_fake.size());
    g.d_loss_wrt_real.assign(d_real.size(), 0.0);
    g.d_loss_wrt_fake.assign(d_fake.size(), 0.0);
    g.g_loss_wrt_fake.assign(d_fake.size(), 0.0);
    for (size_t i = 0; i < d_real.size(); ++i) {
        if (in_clamp_interior(d_real[i])) g.d_loss_wrt_real[i] = -1.0 / (n * d_real[i]);
    }
    for (size_t i = 0; i < d_fake.size(); ++i) {
        if (in_clamp_interior(d_fake[i])) {
            g.d_loss_wrt_fake[i] = 1.0 / (m * (1.0 - d_fake[i]));
            g.g_loss_wrt_fake[i] = -1.0 / (m * d_fake[i]);
        }
    }
    return g;
}

double discriminator_batch_grad(const SeqNetParams& d, const std::vector<Trajectory>& real,
                                const std::vector<Trajectory>& fake, double field_size,
                                std::vector<double>& grad) {
    if (real.empty() || fake.empty())
        throw std::invalid_argument("discriminator batches must be non-empty");
    grad.assign(d.count(), 0.0);
    const double n = static_cast<double>(real.size());
    const double m = static_cast<double>(fake.size());
    double loss = 0.0;
    for (const Trajectory& traj : real) {
        DiscTape tape;
        const double p = disc_forward(d, traj, field_size, &tape);
        loss -= std::log(clamp_prob(p)) / n;
        disc_backward(d, tape, (tape.prob - 1.0) / n, grad.data(), nullptr);
    }
    for (const Trajectory& traj : fake) {
        DiscTape tape;
        const double p = disc_forward(d, traj, field_size, &tape);
        loss -= std::log(1.0 - clamp_prob(p)) / m;
        disc_backward(d, tape, tape.prob / m, grad.data(), nullptr);
    }
    return loss;
}

double generator_batch_grad(const SeqNetParams& g, const SeqNetParams& d,
                            const std::vector<Trajectory>& observed,
                            const std::vector<std::vector<double>>& noises, const GenConfig& cfg,
                            std::vector<double>& grad, std::vector<Trajectory>* fakes) {
    if (observed.empty()) throw std::invalid_argument("generator batch must be non-empty");
    if (observed.size() != noises.size())
        throw std::invalid_argument("one noise vector per observed trajectory required");
    grad.assign(g.count(), 0.0);
    std::vector<double> d_scratch(d.count(), 0.0);
    const double m = static_cast<double>(observed.size());
    double loss = 0.0;
    for (size_t k = 0; k < observed.size(); ++k) {
        GenTape gtape;
        const Trajectory pred = gen_forward(g, observed[k], noises[k], cfg, &gtape);
        Trajectory full = concat_trajectory(observed[k], pred);
        DiscTape dtape;
        const double p = disc_forward(d, full, cfg.field_size, &dtape);
        loss -= std::log(clamp_prob(p)) / m;
        std::vector<std::array<double, 2>> dq_full(full.size(), {0.0, 0.0});
        disc_backward(d, dtape, (dtape.prob - 1.0) / m, d_scratch.data(), &dq_full);
        std::vector<std::array<double, 2>> dq(pred.size());
        for (size_t j = 0; j < pred.size(); ++j) dq[j] = dq_full[observed[k].size() + j];
        gen_backward(g, gtape, dq, grad.data());
        if (fakes) fakes->push_back(std::move(full));
    }
    return loss;
}

Trajectory concat_trajectory(const Trajectory& observed, const Trajectory& generated) {
    Trajectory out = observed;
    for (size_t i = 0; i < generated.size(); ++i)
        out.push_back(generated.points[i], generated.frame_ids[i]);
    out.validate();
    return out;
}

}  // namespace occtrack
