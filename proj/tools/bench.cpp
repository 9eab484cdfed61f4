// Wall-clock comparison of the serial and OpenMP experiment loops on one
// workload, asserting byte-identical CSV output. Exit code 1 if they differ.

#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "jiomber/config.hpp"
#include "jiomber/harness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double timed_csv(jiomber::ExperimentConfig config, bool parallel, std::string& csv) {
    config.parallel = parallel;
    const auto start = std::chrono::steady_clock::now();
    csv = jiomber::to_csv(jiomber::run_experiment(config));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs parallel harness benchmark"};
    std::string preset_name = "ci";
    long long runs = 8, data = 600;
    app.add_option("--preset", preset_name, "Workload preset");
    app.add_option("--runs", runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
    app.add_option("--data", data, "Data symbols per run")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        jiomber::ExperimentConfig config = jiomber::preset(preset_name);
        config.runs = static_cast<int>(runs);
        config.data_symbols = data;

#ifdef _OPENMP
        std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
        std::cout << "OpenMP: not compiled in (both passes run serially)\n";
#endif
        std::string serial_csv, parallel_csv;
        const double t_serial = timed_csv(config, false, serial_csv);
        const double t_parallel = timed_csv(config, true, parallel_csv);
        const bool identical = serial_csv == parallel_csv;

        std::cout << "workload: preset " << preset_name << ", runs " << runs << ", data "
                  << data << "\n";
        std::cout << "serial:   " << t_serial << " s\n";
        std::cout << "parallel: " << t_parallel << " s (speedup "
                  << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x)\n";
        std::cout << "outputs identical: " << (identical ? "yes" : "NO") << "\n";
        return identical ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
