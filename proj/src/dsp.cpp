#include "ltir/dsp.hpp"

#include "ltir/fft.hpp"
#include "ltir/physics.hpp"
#include "ltir/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

namespace ltir {

namespace {

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    return values[mid];
}

std::vector<double> analytic_magnitude(const std::vector<double>& row) {
    const std::size_t n = row.size();
    if (n == 0) return {};
    std::vector<std::complex<double>> spec = fft::forward_real(row);
    // One-sided doubling: keep DC (and Nyquist for even n) untouched.
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    const std::vector<std::complex<double>> analytic = fft::inverse(spec);
    std::vector<double> magnitude(n);
    for (std::size_t i = 0; i < n; ++i) magnitude[i] = std::abs(analytic[i]);
    return magnitude;
}

double max_echo_delay(const Scene& scene, const Antenna& antenna,
                      const std::vector<double>& positions) {
    double max_delay = 0.0;
    for (double position : positions)
        for (const Echo& echo : enumerate_echoes(scene, antenna, position))
            max_delay = std::max(max_delay, echo.delay);
    return max_delay;
}

} // namespace

Spectrum spectrum(const Waveform& w) {
    if (w.samples.empty()) throw std::invalid_argument("empty waveform");
    const std::size_t n = w.size();
    const std::vector<std::complex<double>> full = fft::forward_real(w.samples);
    Spectrum s;
    s.source_sample_rate = w.sample_rate;
    const std::size_t bins = n / 2 + 1;
    s.frequency_axis.resize(bins);
    s.values.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        s.frequency_axis[k] = static_cast<double>(k) * w.sample_rate / static_cast<double>(n);
        s.values[k] = full[k];
    }
    return s;
}

Spectrum rescale_to_thz(const Spectrum& s, double lo_frequency) {
    if (lo_frequency < 0.0) throw std::invalid_argument("lo_frequency must be >= 0");
    Spectrum out = s;
    for (double& f : out.frequency_axis) f += lo_frequency;
    return out;
}

Radargram build_bscan(const Scene& scene, const Antenna& antenna, const Pulse& pulse,
                      const std::vector<double>& positions, double noise_rms,
                      std::uint64_t seed, const BscanOptions& options) {
    if (positions.size() < 2) throw std::invalid_argument("need >= 2 scan positions");
    const double step = positions[1] - positions[0];
    for (std::size_t i = 1; i < positions.size(); ++i)
        if (std::abs(positions[i] - positions[i - 1] - step) > 1e-12 * std::abs(step) + 1e-15)
            throw std::invalid_argument("scan positions must be uniformly spaced");

    double window = options.window;
    if (window <= 0.0)
        window = max_echo_delay(scene, antenna, positions) + 16.0 * pulse.width;

    Radargram r;
    r.positions = positions;
    r.amplitudes.resize(positions.size());
    auto render_row = [&](std::size_t i) {
        const std::uint64_t row_seed = GaussianRng::derive_seed(seed, i);
        Waveform w = synthesize_ascan(scene, antenna, pulse, options.sample_rate, window,
                                      positions[i], noise_rms, row_seed);
        if (options.chain) w = run_chain(w, *options.chain).out;
        if (i == 0) {
            r.time_axis.resize(w.size());
            for (std::size_t j = 0; j < w.size(); ++j) r.time_axis[j] = w.time_at(j);
        }
        r.amplitudes[i] = std::move(w.samples);
    };

    if (options.parallel) {
        const std::size_t workers =
            std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                                  positions.size());
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < positions.size(); i += workers) render_row(i);
            });
        for (std::thread& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < positions.size(); ++i) render_row(i);
    }
    return r;
}

Radargram remove_clutter(const Radargram& r) {
    if (r.processed != Processing::raw)
        throw std::logic_error("remove_clutter requires a raw radargram");
    if (r.amplitudes.size() < 2)
        throw std::invalid_argument("clutter removal needs >= 2 positions");
    const std::size_t n = r.amplitudes.front().size();
    // Mean trace anchored on the first row: summing the differences keeps
    // the subtraction exact (no rounding residue) when every row is
    // identical, which is the position-invariant case the mean must null.
    std::vector<double> mean_trace(n, 0.0);
    for (const auto& row : r.amplitudes)
        for (std::size_t j = 0; j < n; ++j) mean_trace[j] += row[j] - r.amplitudes[0][j];
    const double inv = 1.0 / static_cast<double>(r.amplitudes.size());
    for (std::size_t j = 0; j < n; ++j)
        mean_trace[j] = r.amplitudes[0][j] + mean_trace[j] * inv;

    Radargram out = r;
    out.processed = Processing::clutter_removed;
    for (auto& row : out.amplitudes)
        for (std::size_t j = 0; j < n; ++j) row[j] -= mean_trace[j];
    return out;
}

Radargram envelope(const Radargram& r) {
    Radargram out = r;
    out.processed = Processing::envelope;
    for (auto& row : out.amplitudes) row = analytic_magnitude(row);
    return out;
}

std::vector<Detection> detect_defects(const Radargram& r, const Scene& scene,
                                      double threshold_factor,
                                      std::size_t min_cluster_cells) {
    if (r.processed != Processing::clutter_removed)
        throw std::logic_error("detect_defects requires a clutter-removed radargram");
    const Radargram env = envelope(r);
    const std::size_t rows = env.amplitudes.size();
    const std::size_t cols = rows ? env.amplitudes.front().size() : 0;

    // Robust noise scale from the signed residual radargram.
    std::vector<double> all;
    all.reserve(rows * cols);
    for (const auto& row : r.amplitudes) all.insert(all.end(), row.begin(), row.end());
    const double med = median_of(all);
    for (double& v : all) v = std::abs(v - med);
    double sigma = 1.4826 * median_of(std::move(all));
    double env_max = 0.0;
    for (const auto& row : env.amplitudes)
        for (double v : row) env_max = std::max(env_max, v);
    sigma = std::max(sigma, 1e-6 * env_max); // floor for noiseless input
    const double threshold = threshold_factor * sigma;

    const double dt =
        env.time_axis.size() > 1 ? env.time_axis[1] - env.time_axis[0] : 0.0;

    // A scatterer's hyperbolic arc can shift by many time cells between
    // adjacent scan positions, so plain 8-connectivity fragments the tails
    // of the arc into one cluster per row. Extend the cross-row reach to
    // cover the worst moveout step of any scatterer inside the layer stack
    // anywhere along this scan.
    std::ptrdiff_t jlink = 1;
    if (dt > 0.0 && rows >= 2) {
        const double step = std::abs(env.positions[1] - env.positions[0]);
        const double span = std::abs(env.positions.back() - env.positions.front());
        const double total = total_depth(scene);
        double t_link = 0.0;
        for (double f : {0.02, 0.25, 0.5, 0.75, 0.999}) {
            const double depth = f * total;
            const double t0 = two_way_delay(scene, depth);
            const double h = depth + scene.standoff();
            auto moveout = [&](double offset) {
                return t0 * std::sqrt(1.0 + (offset / h) * (offset / h));
            };
            t_link = std::max(t_link, moveout(span) - moveout(span - step));
        }
        jlink = std::max<std::ptrdiff_t>(
            1, static_cast<std::ptrdiff_t>(std::ceil(t_link / dt)));
    }

    // Clustering of cells above threshold: 8-connectivity widened to jlink
    // cells along the time axis between adjacent rows.
    std::vector<std::vector<int>> label(rows, std::vector<int>(cols, -1));
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> clusters;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (env.amplitudes[i][j] <= threshold || label[i][j] >= 0) continue;
            const int id = static_cast<int>(clusters.size());
            clusters.emplace_back();
            std::deque<std::pair<std::size_t, std::size_t>> frontier{{i, j}};
            label[i][j] = id;
            while (!frontier.empty()) {
                const auto [ci, cj] = frontier.front();
                frontier.pop_front();
                clusters[id].emplace_back(ci, cj);
                for (int di = -1; di <= 1; ++di) {
                    const std::ptrdiff_t reach = di == 0 ? 1 : jlink;
                    for (std::ptrdiff_t dj = -reach; dj <= reach; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        const auto ni = static_cast<std::ptrdiff_t>(ci) + di;
                        const auto nj = static_cast<std::ptrdiff_t>(cj) + dj;
                        if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(rows) ||
                            nj >= static_cast<std::ptrdiff_t>(cols))
                            continue;
                        auto ui = static_cast<std::size_t>(ni);
                        auto uj = static_cast<std::size_t>(nj);
                        if (label[ui][uj] < 0 && env.amplitudes[ui][uj] > threshold) {
                            label[ui][uj] = id;
                            frontier.emplace_back(ui, uj);
                        }
                    }
                }
            }
        }
    }

    const Layer& frp = scene.layers().back();
    const double frp_top = total_depth(scene) - frp.thickness;
    const double surface_delay = two_way_delay(scene, frp_top);

    // Parabolic interpolation of a row's envelope peak around column j.
    auto interpolated_delay = [&](std::size_t row, std::size_t j) {
        double delay = env.time_axis[j];
        if (j > 0 && j + 1 < cols) {
            const double ym = env.amplitudes[row][j - 1];
            const double y0 = env.amplitudes[row][j];
            const double yp = env.amplitudes[row][j + 1];
            const double denom = ym - 2.0 * y0 + yp;
            if (denom < 0.0) delay += 0.5 * (ym - yp) / denom * dt;
        }
        return delay;
    };

    std::vector<std::pair<Detection, double>> scored; // detection, cluster mass
    for (const auto& cluster : clusters) {
        if (cluster.size() < min_cluster_cells) continue;
        double peak = 0.0;
        double weight_sum = 0.0;
        double centroid = 0.0;
        std::vector<std::size_t> row_col(rows, cols); // cols = no cell in this row
        for (const auto& [ci, cj] : cluster) {
            const double v = env.amplitudes[ci][cj];
            peak = std::max(peak, v);
            weight_sum += v;
            centroid += v * env.positions[ci];
            if (row_col[ci] == cols || v > env.amplitudes[ci][row_col[ci]]) row_col[ci] = cj;
        }
        centroid /= weight_sum;

        // Apex from a weighted least-squares fit of the per-row peak delay:
        // the arc is t(x) = t0 sqrt(1 + ((x-x0)/h)^2), so t^2 is exactly
        // quadratic in x and the apex (x0, t0) falls out of the fit. Scale
        // to the weighted means to keep the normal equations conditioned.
        std::vector<double> xs, taus, ws;
        for (std::size_t i = 0; i < rows; ++i) {
            if (row_col[i] == cols) continue;
            xs.push_back(env.positions[i]);
            taus.push_back(interpolated_delay(i, row_col[i]));
            const double v = env.amplitudes[i][row_col[i]];
            ws.push_back(v * v);
        }
        double lateral = centroid;
        std::size_t apex_row = 0;
        bool fitted = false;
        double fit_delay = 0.0;
        if (xs.size() >= 5) {
            double wsum = 0.0, xbar = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                wsum += ws[i];
                xbar += ws[i] * xs[i];
            }
            xbar /= wsum;
            double scale = 0.0;
            for (double x : xs) scale = std::max(scale, std::abs(x - xbar));
            if (scale > 0.0) {
                std::vector<double> us(xs.size()), ys(xs.size()), wts = ws;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    us[i] = (xs[i] - xbar) / scale;
                    ys[i] = taus[i] * taus[i];
                }
                double a = 0.0, b = 0.0, c = 0.0;
                auto solve = [&]() {
                    double m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0, y0 = 0, y1 = 0, y2 = 0;
                    for (std::size_t i = 0; i < us.size(); ++i) {
                        const double u = us[i];
                        const double y = ys[i];
                        const double w = wts[i];
                        m0 += w;
                        m1 += w * u;
                        m2 += w * u * u;
                        m3 += w * u * u * u;
                        m4 += w * u * u * u * u;
                        y0 += w * y;
                        y1 += w * u * y;
                        y2 += w * u * u * y;
                    }
                    // Solve [m4 m3 m2; m3 m2 m1; m2 m1 m0] [a b c] = [y2 y1 y0].
                    const double det = m4 * (m2 * m0 - m1 * m1) - m3 * (m3 * m0 - m1 * m2) +
                                       m2 * (m3 * m1 - m2 * m2);
                    if (std::abs(det) < 1e-30) return false;
                    a = (y2 * (m2 * m0 - m1 * m1) - m3 * (y1 * m0 - y0 * m1) +
                         m2 * (y1 * m1 - y0 * m2)) /
                        det;
                    b = (m4 * (y1 * m0 - y0 * m1) - y2 * (m3 * m0 - m1 * m2) +
                         m2 * (m3 * y0 - m2 * y1)) /
                        det;
                    c = (m4 * (m2 * y0 - y1 * m1) - m3 * (m3 * y0 - y1 * m2) +
                         y2 * (m3 * m1 - m2 * m2)) /
                        det;
                    return true;
                };
                bool solved = solve();
                if (solved) {
                    // One robust pass: rows whose peak delay disagrees with
                    // the first fit (noise-skewed tails) are dropped.
                    double res_sq = 0.0, wsum2 = 0.0;
                    for (std::size_t i = 0; i < us.size(); ++i) {
                        const double r = ys[i] - (a * us[i] * us[i] + b * us[i] + c);
                        res_sq += wts[i] * r * r;
                        wsum2 += wts[i];
                    }
                    const double sigma_r = std::sqrt(res_sq / wsum2);
                    if (sigma_r > 0.0) {
                        std::size_t kept = 0;
                        for (std::size_t i = 0; i < us.size(); ++i) {
                            const double r = ys[i] - (a * us[i] * us[i] + b * us[i] + c);
                            if (std::abs(r) > 3.0 * sigma_r) wts[i] = 0.0;
                            else ++kept;
                        }
                        if (kept >= 5) solved = solve();
                    }
                }
                if (solved && a > 0.0) {
                    const double u0 = -b / (2.0 * a);
                    const double t0sq = c - b * b / (4.0 * a);
                    const double x0 = xbar + u0 * scale;
                    const double step = rows > 1 ? env.positions[1] - env.positions[0] : 0.0;
                    // Trust interpolated apexes only: a cluster covering one
                    // tail of an arc would otherwise extrapolate a bogus,
                    // earlier-delay apex far outside its own rows.
                    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
                    if (t0sq > 0.0 && x0 >= *xmin - std::abs(step) &&
                        x0 <= *xmax + std::abs(step)) {
                        lateral = x0;
                        fit_delay = std::sqrt(t0sq);
                        fitted = true;
                    }
                }
            }
        }

        // Nearest row to the lateral estimate supplies the fallback delay.
        for (std::size_t i = 1; i < rows; ++i)
            if (std::abs(env.positions[i] - lateral) <
                std::abs(env.positions[apex_row] - lateral))
                apex_row = i;
        double delay = fitted ? fit_delay : 0.0;
        if (!fitted) {
            std::size_t best_col = 0;
            double best_val = -1.0;
            for (const auto& [ci, cj] : cluster) {
                if (ci != apex_row) continue;
                if (env.amplitudes[ci][cj] > best_val) {
                    best_val = env.amplitudes[ci][cj];
                    best_col = cj;
                }
            }
            delay = interpolated_delay(apex_row, best_col);
        }

        Detection detection;
        detection.lateral_position = lateral;
        detection.echo_delay = delay;
        detection.peak_amplitude = peak;
        detection.snr_db = 20.0 * std::log10(peak / sigma);
        const double delta = delay - surface_delay;
        if (delta < 0.0) {
            detection.estimated_depth = 0.0;
            detection.above_frp_surface = true;
        } else {
            detection.estimated_depth = estimate_depth(delta, frp.material.eps_r);
        }
        scored.emplace_back(detection, weight_sum);
    }

    // Noise can break one scatterer's arc into several clusters where the
    // beam taper holds it near the threshold. A detection sitting on an
    // earlier detection's predicted hyperbola is a fragment of the same
    // arc, not a second scatterer: absorb it, keeping the estimate from
    // the heavier cluster. The arc's apex is its minimum-delay point, so
    // processing in delay order tests the tails against the apex.
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first.echo_delay < b.first.echo_delay;
    });
    std::vector<std::pair<Detection, double>> merged;
    for (const auto& candidate : scored) {
        bool absorbed = false;
        for (auto& keep : merged) {
            const double h = scene.standoff() + frp_top + keep.first.estimated_depth;
            const double offset =
                candidate.first.lateral_position - keep.first.lateral_position;
            const double predicted =
                keep.first.echo_delay * std::sqrt(1.0 + (offset / h) * (offset / h));
            const double tolerance = std::max(4.0 * dt, 0.01 * keep.first.echo_delay);
            if (std::abs(candidate.first.echo_delay - predicted) <= tolerance) {
                if (candidate.second > keep.second) keep = candidate;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(candidate);
    }
    std::vector<Detection> detections;
    detections.reserve(merged.size());
    for (const auto& [detection, mass] : merged) detections.push_back(detection);

    std::sort(detections.begin(), detections.end(),
              [](const Detection& a, const Detection& b) {
                  return a.lateral_position < b.lateral_position;
              });
    return detections;
}

} // namespace ltir
