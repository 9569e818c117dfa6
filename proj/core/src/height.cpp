#include "chordkit/height.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include "chordkit/error.hpp"
#include "chordkit/material.hpp"

namespace chordkit {

namespace {

// FFTW's planner is not reentrant.
std::mutex g_planner_mutex;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) {
        throw Error("fftw_malloc failed");
    }
    return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) {
            throw Error("FFTW planning failed");
        }
    }
    ~Plan() {
        std::lock_guard lock(g_planner_mutex);
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

GradientField::GradientField(TextureImage p, TextureImage q, double pixel_scale)
    : p_(std::move(p)), q_(std::move(q)), pixel_scale_(pixel_scale) {
    if (p_.channels() != 1 || q_.channels() != 1) {
        throw ValidationError("gradient components must be single-channel");
    }
    require_same_resolution(p_, q_, "GradientField");
    if (!(pixel_scale_ > 0.0) || !std::isfinite(pixel_scale_)) {
        throw ValidationError("pixel_scale must be positive and finite");
    }
}

GradientField normals_to_gradients(const TextureImage& normal, double height_scale) {
    if (normal.channels() != 3) {
        throw ValidationError("normal map must have 3 channels");
    }
    const auto d = normal.data();
    std::vector<double> p(normal.pixel_count());
    std::vector<double> q(normal.pixel_count());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double nz = std::max(d[3 * i + 2], kMinNormalZ);
        p[i] = -d[3 * i] / nz * height_scale;
        q[i] = -d[3 * i + 1] / nz * height_scale;
    }
    return {TextureImage(normal.width(), normal.height(), 1, std::move(p)),
            TextureImage(normal.width(), normal.height(), 1, std::move(q))};
}

TextureImage integrate_gradients(const GradientField& g) {
    const int w = g.p().width();
    const int h = g.p().height();
    const int wc = w / 2 + 1;
    const std::size_t n_real = static_cast<std::size_t>(w) * h;
    const std::size_t n_freq = static_cast<std::size_t>(wc) * h;

    auto real = fftw_buffer<double>(n_real);
    auto p_hat = fftw_buffer<fftw_complex>(n_freq);
    auto q_hat = fftw_buffer<fftw_complex>(n_freq);

    std::unique_ptr<Plan> fwd_p;
    std::unique_ptr<Plan> fwd_q;
    std::unique_ptr<Plan> inv;
    {
        std::lock_guard lock(g_planner_mutex);
        // FFTW_ESTIMATE keeps plans (and therefore roundoff) identical run to run.
        fwd_p = std::make_unique<Plan>(
            fftw_plan_dft_r2c_2d(h, w, real.get(), p_hat.get(), FFTW_ESTIMATE));
        fwd_q = std::make_unique<Plan>(
            fftw_plan_dft_r2c_2d(h, w, real.get(), q_hat.get(), FFTW_ESTIMATE));
        inv = std::make_unique<Plan>(
            fftw_plan_dft_c2r_2d(h, w, p_hat.get(), real.get(), FFTW_ESTIMATE));
    }

    std::ranges::copy(g.p().data(), real.get());
    fwd_p->execute();
    std::ranges::copy(g.q().data(), real.get());
    fwd_q->execute();

    // p = (h[x+1] - h[x-1]) / 2s   ->  P = j sin(wx) H / s
    // q = (h[y-1] - h[y+1]) / 2s   ->  Q = -j sin(wy) H / s   (rows grow downward)
    // Least squares: H = s (-j sx P + j sy Q) / (sx^2 + sy^2).
    const double s = g.pixel_scale();
    const double norm = 1.0 / static_cast<double>(n_real);
    for (int ky = 0; ky < h; ++ky) {
        const double sy = std::sin(2.0 * std::numbers::pi * ky / h);
        for (int kx = 0; kx < wc; ++kx) {
            const double sx = std::sin(2.0 * std::numbers::pi * kx / w);
            const std::size_t i = static_cast<std::size_t>(ky) * wc + kx;
            const double denom = sx * sx + sy * sy;
            if (denom < 1e-12) {
                // DC, and the Nyquist bins the central stencil cannot see.
                p_hat[i][0] = 0.0;
                p_hat[i][1] = 0.0;
                continue;
            }
            const std::complex<double> pc(p_hat[i][0], p_hat[i][1]);
            const std::complex<double> qc(q_hat[i][0], q_hat[i][1]);
            const std::complex<double> j(0.0, 1.0);
            const std::complex<double> hc = (-j * sx * pc + j * sy * qc) * (s * norm / denom);
            p_hat[i][0] = hc.real();
            p_hat[i][1] = hc.imag();
        }
    }
    inv->execute();

    std::vector<double> out(real.get(), real.get() + n_real);
    double mean = 0.0;
    for (double v : out) {
        mean += v;
    }
    mean /= static_cast<double>(n_real);
    for (double& v : out) {
        v -= mean;
    }
    return TextureImage(w, h, 1, std::move(out));
}

TextureImage height_to_normals(const TextureImage& height, double height_scale) {
    if (height.channels() != 1) {
        throw ValidationError("height map must be single-channel");
    }
    const int w = height.width();
    const int h = height.height();
    std::vector<double> out(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        const int up = (y + h - 1) % h;
        const int down = (y + 1) % h;
        for (int x = 0; x < w; ++x) {
            const int left = (x + w - 1) % w;
            const int right = (x + 1) % w;
            const double p = 0.5 * (height.at(right, y) - height.at(left, y));
            const double q = 0.5 * (height.at(x, up) - height.at(x, down));
            const Vec3 n = normalize(Vec3{-p, -q, height_scale});
            const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
            out[o] = n.x;
            out[o + 1] = n.y;
            out[o + 2] = n.z;
        }
    }
    return TextureImage(w, h, 3, std::move(out));
}

TextureImage integrate_normals(const TextureImage& normal, double height_scale) {
    return integrate_gradients(normals_to_gradients(normal, height_scale));
}

}  // namespace chordkit
