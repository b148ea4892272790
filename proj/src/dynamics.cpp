#include "zensim/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace zensim {

std::vector<Segment> compile_period(const PulseSequence& seq)
{
    std::vector<Pulse> pulses = seq.pulses;
    std::stable_sort(pulses.begin(), pulses.end(),
                     [](const Pulse& a, const Pulse& b) { return a.offset < b.offset; });
    const double half = seq.period / 2;
    const bool square = seq.b_rf != 0;
    std::vector<Segment> out;
    double t = 0;
    // Free or driven stretch [t, t1) split at the square-wave edge.
    auto stretch = [&](double t1, bool pulse, const Pulse* p) {
        auto push = [&](double a, double b) {
            if (b - a <= 1e-12) return;
            Segment s;
            s.duration = b - a;
            s.b_rf = square ? (0.5 * (a + b) < half ? seq.b_rf : -seq.b_rf) : 0.0;
            if (pulse) {
                s.axis = p->axis;
                s.rabi = p->angle / p->duration;
            } else if (seq.drive_rabi != 0) {
                s.axis = Axis::Y;
                s.rabi = seq.drive_rabi;
            }
            out.push_back(s);
        };
        if (square && t < half && t1 > half) {
            push(t, half);
            push(half, t1);
        } else push(t, t1);
        t = t1;
    };
    for (const auto& p : pulses) {
        if (p.offset > t) stretch(p.offset, false, nullptr);
        if (p.duration > 0) {
            stretch(p.offset + p.duration, true, &p);
        } else {
            Segment s;
            s.instantaneous = true;
            s.qubit_unitary = rotation_pulse(p.axis, p.angle);
            out.push_back(s);
        }
    }
    if (seq.period > t) stretch(seq.period, false, nullptr);
    return out;
}

Matrix apply_qubit(const Matrix& P, const Matrix& U)
{
    const Eigen::Index h = U.rows() / 2;
    Matrix out(U.rows(), U.cols());
    out.topRows(h) = P(0, 0) * U.topRows(h) + P(0, 1) * U.bottomRows(h);
    out.bottomRows(h) = P(1, 0) * U.topRows(h) + P(1, 1) * U.bottomRows(h);
    return out;
}

Vector apply_qubit(const Matrix& P, const Vector& psi)
{
    const Eigen::Index h = psi.size() / 2;
    Vector out(psi.size());
    out.head(h) = P(0, 0) * psi.head(h) + P(0, 1) * psi.tail(h);
    out.tail(h) = P(1, 0) * psi.head(h) + P(1, 1) * psi.tail(h);
    return out;
}

namespace {

Matrix drive_operator(const SpinSystem& sys, Axis axis)
{
    switch (axis) {
    case Axis::X: return sys.sx();
    case Axis::Y: return sys.sy();
    case Axis::MinusX: return -sys.sx();
    case Axis::MinusY: return -sys.sy();
    }
    return sys.sx();
}

} // namespace

Matrix period_propagator(const PulseSequence& seq, const SpinSystem& sys, double b_oh, const Matrix& extra)
{
    const auto segments = compile_period(seq);
    using Key = std::tuple<double, int, double, double>;
    std::map<Key, Matrix> cache;
    Matrix U = Matrix::Identity(sys.dim(), sys.dim());
    std::map<std::pair<double, int>, Matrix> hcache;
    for (const auto& s : segments) {
        if (s.instantaneous) {
            U = apply_qubit(s.qubit_unitary, U);
            continue;
        }
        const int ax = s.rabi != 0 ? static_cast<int>(s.axis) : -1;
        const Key key{s.b_rf, ax, s.rabi, s.duration};
        auto it = cache.find(key);
        if (it == cache.end()) {
            Matrix H = full_hamiltonian(sys, b_oh, s.b_rf);
            if (extra.size() > 0) H += extra;
            if (ax >= 0) H += s.rabi * drive_operator(sys, s.axis);
            it = cache.emplace(key, propagator<double>(H, s.duration)).first;
        }
        U = it->second * U;
    }
    return U;
}

Matrix period_propagator(const PulseSequence& seq, const SpinSystem& sys, double b_oh)
{
    return period_propagator(seq, sys, b_oh, Matrix());
}

Matrix matrix_power(const Matrix& U, int n)
{
    if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
    Matrix result = Matrix::Identity(U.rows(), U.cols());
    Matrix base = U;
    while (n > 0) {
        if (n & 1) result = base * result;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

std::vector<std::string> default_observable_names() { return {"yb_pop_1g", "v_pop_down"}; }

double yb_population_1g(const SpinSystem& sys, const Vector& psi)
{
    return psi.head(sys.dim() / 2).squaredNorm();
}

double down_population(const SpinSystem& sys, const Vector& psi, int spin)
{
    const int L = sys.levels();
    int stride = 1;
    for (int k = sys.n_spins() - 1; k > spin; --k) stride *= L;
    double p = 0;
    for (int idx = 0; idx < psi.size(); ++idx)
        if ((idx / stride) % L == 0) p += std::norm(psi(idx));
    return p;
}

std::vector<double> default_observables(const SpinSystem& sys, const Vector& psi)
{
    double down = 0;
    for (int i = 0; i < sys.n_spins(); ++i) down += down_population(sys, psi, i);
    return {yb_population_1g(sys, psi), sys.n_spins() > 0 ? down / sys.n_spins() : 0.0};
}

Trajectory propagate_sequence(const PulseSequence& seq, const SpinSystem& sys, double b_oh, const Vector& psi0,
                              const Matrix& extra, const Observer& observer,
                              const std::vector<std::string>& names, BathDrive* bath)
{
    if (psi0.size() != sys.dim())
        throw std::invalid_argument("propagate_sequence: state dimension does not match the system");
    if (extra.size() > 0 && extra.rows() != sys.dim())
        throw std::invalid_argument("propagate_sequence: extra Hamiltonian dimension mismatch");
    Trajectory tr;
    tr.names = names;
    tr.series.assign(names.size(), {});
    auto record = [&](double t, const Vector& psi) {
        tr.times.push_back(t);
        const auto v = observer(sys, psi);
        for (std::size_t k = 0; k < v.size() && k < tr.series.size(); ++k) tr.series[k].push_back(v[k]);
    };
    Vector psi = psi0;
    record(0, psi);
    const bool jumping = bath && bath->spec && bath->spec->jump_rate > 0;
    Matrix U;
    double field = jumping ? bath->state.field : b_oh;
    if (seq.repetitions > 0) U = period_propagator(seq, sys, field, extra);
    for (int m = 1; m <= seq.repetitions; ++m) {
        psi = U * psi;
        record(m * seq.period, psi);
        if (jumping && m < seq.repetitions) {
            bath->state = evolve_bath(*bath->spec, bath->state, seq.period, bath->spec->jump_rate, *bath->rng);
            if (bath->state.field != field) {
                field = bath->state.field;
                U = period_propagator(seq, sys, field, extra);
            }
        }
    }
    return tr;
}

int worker_count()
{
    if (const char* env = std::getenv("ZENSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(int n, const std::function<void(int)>& body, int workers)
{
    if (workers <= 0) workers = worker_count();
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = next++; i < n; i = next++) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

struct Moments {
    double n = 0, mean = 0, m2 = 0;
};

Moments merge(const Moments& a, const Moments& b)
{
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments c;
    c.n = a.n + b.n;
    const double d = b.mean - a.mean;
    c.mean = a.mean + d * b.n / c.n;
    c.m2 = a.m2 + b.m2 + d * d * a.n * b.n / c.n;
    return c;
}

Moments reduce(const std::vector<Trajectory>& trs, std::size_t obs, std::size_t pt, int lo, int hi)
{
    if (hi - lo == 1) return {1.0, trs[lo].series[obs][pt], 0.0};
    const int mid = lo + (hi - lo) / 2;
    return merge(reduce(trs, obs, pt, lo, mid), reduce(trs, obs, pt, mid, hi));
}

} // namespace

EnsembleResult monte_carlo(const Experiment& experiment, int reps, std::uint64_t seed, int workers)
{
    if (reps < 1) throw std::invalid_argument("monte_carlo: reps must be >= 1");
    std::vector<Trajectory> trs(reps);
    parallel_for(
        reps,
        [&](int r) {
            Rng rng = stream_rng(seed, static_cast<std::uint64_t>(r));
            trs[r] = experiment(r, rng);
        },
        workers);
    EnsembleResult res;
    res.reps = reps;
    res.seed = seed;
    res.times = trs[0].times;
    res.names = trs[0].names;
    for (const auto& t : trs)
        if (t.series.size() != trs[0].series.size() || (!t.series.empty() && t.series[0].size() != trs[0].series[0].size()))
            throw std::runtime_error("monte_carlo: repetitions produced mismatched series");
    res.mean.assign(res.names.size(), {});
    res.stderr_.assign(res.names.size(), {});
    for (std::size_t o = 0; o < trs[0].series.size(); ++o)
        for (std::size_t p = 0; p < trs[0].series[o].size(); ++p) {
            const Moments m = reduce(trs, o, p, 0, reps);
            res.mean[o].push_back(m.mean);
            const double var = reps > 1 ? m.m2 / (reps - 1) : 0.0;
            res.stderr_[o].push_back(std::sqrt(var / reps));
        }
    return res;
}

FloquetResult floquet_oracle(const PulseSequence& seq, const SpinSystem& sys, double b_oh)
{
    FloquetResult fr;
    fr.unitary = period_propagator(seq, sys, b_oh);
    Eigen::VectorXd E = Eigen::VectorXd::Zero(sys.dim());
    for (int i = 0; i < sys.n_spins(); ++i) E += sys.spins()[i].q * sys.iz2(i).diagonal().real();
    for (int composed = 1; composed <= 4; composed *= 2) {
        const double T = seq.period * composed;
        const Matrix U = composed == 1 ? fr.unitary : matrix_power(fr.unitary, composed);
        Vector ph(sys.dim());
        for (int k = 0; k < sys.dim(); ++k) ph(k) = std::polar(1.0, E(k) * T);
        const Matrix Urot = ph.asDiagonal() * U;
        Eigen::ComplexSchur<Matrix> schur(Urot);
        const Matrix& Z = schur.matrixU();
        const Matrix& Tm = schur.matrixT();
        Eigen::VectorXd eps(sys.dim());
        bool near = false;
        for (int k = 0; k < sys.dim(); ++k) {
            const double a = std::arg(Tm(k, k));
            if (std::abs(a) > kPi - 1e-3) near = true;
            eps(k) = -a / T;
        }
        fr.generator = Z * eps.cast<cplx>().asDiagonal() * Z.adjoint();
        fr.generator = 0.5 * (fr.generator + fr.generator.adjoint());
        fr.near_branch_cut = near;
        fr.composed_periods = composed;
        if (!near) break;
    }
    return fr;
}

std::vector<IonInit> imperfect_initial_state(double eps1, double eps2, int n_ions, Rng& rng)
{
    if (eps1 < 0 || eps2 < 0 || eps1 + eps2 > 1)
        throw std::invalid_argument("imperfect_initial_state: need eps1, eps2 >= 0 and eps1 + eps2 <= 1");
    std::vector<IonInit> out;
    for (int i = 0; i < n_ions; ++i) {
        const double u = uniform01(rng);
        out.push_back(u < eps1 ? IonInit::Up : (u < eps1 + eps2 ? IonInit::Removed : IonInit::Down));
    }
    return out;
}

Vector product_state(const SpinSystem& sys, int qubit, const std::vector<int>& levels)
{
    Vector psi = Vector::Zero(sys.dim());
    psi(sys.index(qubit, levels)) = 1.0;
    return psi;
}

} // namespace zensim
