// Serial reference loop vs OpenMP replication kernel on the simulation grids, plus
// the dense ridge oracle vs the Woodbury expansion.
#include "argpca/arg_estimator.hpp"
#include "argpca/hdlss_pca.hpp"
#include "argpca/parallel.hpp"
#include "argpca/report.hpp"
#include "argpca/sim_harness.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

using namespace argpca;
using clock_type = std::chrono::steady_clock;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
    const auto t0 = clock_type::now();
    fn();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string csv_of(const GridResult& r) {
    std::ostringstream os;
    write_summary_csv(os, r.summaries);
    return os.str();
}

void compare_grid(const char* name, const ExperimentConfig& cfg, int threads) {
    GridResult serial, parallel;
    const double ts = seconds([&] { serial = run_experiment(cfg, Execution{1, true}); });
    const double tp = seconds([&] { parallel = run_experiment(cfg, Execution{threads, false}); });
    std::cout << name << ": serial " << format_fixed(ts, 3) << " s, openmp(" << threads << ") "
              << format_fixed(tp, 3) << " s, speedup " << format_fixed(ts / tp, 2) << "x, identical="
              << (csv_of(serial) == csv_of(parallel) ? "yes" : "NO") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : default_threads();
    const int reps = argc > 2 ? std::atoi(argv[2]) : 100;

    ExperimentConfig t1 = table1_config();
    t1.replications = reps;
    ExperimentConfig t2 = table2_config();
    t2.replications = reps;
    compare_grid("table1 grid", t1, threads);
    compare_grid("table2 grid", t2, threads);

    for (Eigen::Index p : {200, 1000, 2000}) {
        const SpikedModelSpec spec = two_spike_spec(p);
        const SampleDraw draw = sample_gaussian(spec, 7);
        const SamplePca pca = gram_pca(center(draw.X), 2);
        const ReferenceSet refs = reference_table2(make_walsh_basis(p));
        RidgeVectors a, b;
        const double te = seconds([&] { a = ridge_vectors_expansion(pca, refs); });
        const double td = seconds([&] { b = ridge_vectors_direct(pca, refs); });
        std::cout << "ridge vectors p=" << p << ": expansion " << format_fixed(te * 1e3, 3) << " ms, dense "
                  << format_fixed(td * 1e3, 3) << " ms, rel diff "
                  << (a.D - b.D).norm() / b.D.norm() << '\n';
    }
    return 0;
}
