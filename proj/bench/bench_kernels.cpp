// Times the OpenMP kernels against their serial reference implementations
// and checks that both paths produce identical results.
//
//   zkit-bench [corpus.txt]
//
// Without a corpus argument a small built-in English sample is used; timings
// are then still comparable between the two paths, just on a weaker model.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "zkit/generator.hpp"
#include "zkit/grid.hpp"
#include "zkit/language_model.hpp"
#include "zkit/solver.hpp"
#include "zkit/statistics.hpp"

using namespace zkit;

namespace {

const char* kSample =
    "The quick brown fox jumps over the lazy dog while the old man walks\n"
    "down to the river in the early morning light and thinks about the\n"
    "people he has known and the places he has seen over the long years\n"
    "of his life and the work that remains to be done before the winter\n"
    "comes back to the valley with snow on the hills and ice on the water\n"
    "and everyone stays close to the fire telling stories about the past\n"
    "and what they hope will happen in the spring when the roads open\n";

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double timed(F&& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    return seconds(start, std::chrono::steady_clock::now());
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s %9.3fs %9.3fs %7.2fx  %s\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::string corpus = kSample;
    if (argc > 1) {
        std::ifstream in(argv[1], std::ios::binary);
        if (!in) {
            std::fprintf(stderr, "cannot read %s\n", argv[1]);
            return 2;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        corpus = buffer.str();
    }

    GeneratorSpec spec;
    spec.length = 340;
    spec.budget = 63;
    spec.seed = 7;
    GeneratedCipher cipher = generate(spec, corpus);

    std::printf("%-28s %10s %10s %8s  %s\n", "kernel", "serial", "parallel", "speedup",
                "results");
    int failures = 0;

    {
        ShuffleBaseline a, b;
        double ts = timed([&] { a = shuffle_baseline_serial(cipher.grid, 1, 20000, 11); });
        double tp = timed([&] { b = shuffle_baseline(cipher.grid, 1, 20000, 11); });
        bool same = a.mean == b.mean && a.stddev == b.stddev && a.z == b.z;
        report("shuffle_baseline 20k", ts, tp, same);
        failures += !same;
    }

    {
        std::istringstream in(corpus);
        NGramModel model = NGramModel::build(in, 3, "bench corpus");
        SolverConfig config;
        config.iterations = 30000;
        config.restarts = 4;
        config.seed = 11;
        CandidateSolution a, b;
        double ts = timed([&] { a = solve_serial(cipher.grid, model, config); });
        double tp = timed([&] { b = solve(cipher.grid, model, config); });
        bool same = a.score == b.score && a.plaintext == b.plaintext && a.restart == b.restart;
        report("solve 30k x4 restarts", ts, tp, same);
        failures += !same;
    }

    {
        std::vector<GeneratedCipher> a, b;
        double ts = timed([&] { a = generate_suite_serial(spec, 20, corpus); });
        double tp = timed([&] { b = generate_suite(spec, 20, corpus); });
        bool same = a.size() == b.size();
        for (size_t i = 0; same && i < a.size(); ++i)
            same = a[i].plaintext == b[i].plaintext &&
                   a[i].grid.cells() == b[i].grid.cells() &&
                   a[i].key.serialize() == b[i].key.serialize();
        report("generate_suite 20x340", ts, tp, same);
        failures += !same;
    }

    return failures == 0 ? 0 : 1;
}
