// Benchmark the per-degree parallel path against the serial reference path
// and verify that both produce identical results.
//
// Usage: bench_degrees [--pipeline chain|tower] [--group SPEC | --p P --n N]
//                      [--flavor F] [--degrees a..b] [--D --laurent --precision
//                      --classes --poly] [--jobs J] [--fgl KIND]

#include "CLI11.hpp"

#include "cobord/limit.hpp"
#include "cobord/zpn.hpp"

#include <chrono>
#include <iostream>
#include <thread>

using namespace cobord;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_results(const std::vector<LimitResult>& a, const std::vector<LimitResult>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].degree != b[i].degree) return false;
        if (a[i].invariant_factors != b[i].invariant_factors) return false;
        if (a[i].dims != b[i].dims) return false;
        if (a[i].witness.a != b[i].witness.a) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compare serial and parallel per-degree computation"};
    std::string pipeline = "chain", group = "Z/4", flavor = "P''", degrees = "-6..6";
    std::string fgl = "universal-integral";
    int p = 2, n = 2;
    int D = 2, E = 2, N = 4, I = 2, P = 2;
    int jobs = (int)std::thread::hardware_concurrency();
    if (jobs < 2) jobs = 2;

    app.add_option("--pipeline", pipeline)->check(CLI::IsMember({"chain", "tower"}));
    app.add_option("--group", group);
    app.add_option("--flavor", flavor);
    app.add_option("--p", p);
    app.add_option("--n", n);
    app.add_option("--degrees", degrees);
    app.add_option("--fgl", fgl);
    app.add_option("--D", D);
    app.add_option("--laurent,-E", E);
    app.add_option("--precision,-N", N);
    app.add_option("--classes,-I", I);
    app.add_option("--poly,-P", P);
    app.add_option("--jobs", jobs);
    CLI11_PARSE(app, argc, argv);

    size_t dots = degrees.find("..");
    int lo = std::stoi(degrees.substr(0, dots));
    int hi = std::stoi(degrees.substr(dots + 2));
    TruncParams tp{D, E, N, I, P};
    FormalGroupLaw law = make_law(base_kind_from_name(fgl), 2 * D, D + 1);

    std::vector<LimitResult> serial, parallel;
    double t_serial = 0, t_parallel = 0;

    if (pipeline == "chain") {
        Flavor f = flavor == "P" ? Flavor::Full : flavor == "P'" ? Flavor::Pairs : Flavor::Reduced;
        FinAbGroup G = parse_group(group);
        Diagram dia = assemble_diagram(G, f, tp, law);
        auto t0 = std::chrono::steady_clock::now();
        serial = limit_range(dia, lo, hi, 1);
        t_serial = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        parallel = limit_range(dia, lo, hi, jobs);
        t_parallel = seconds_since(t0);
        std::cout << "chain pipeline, " << group << " flavor " << flavor;
    } else {
        ZpnStair Z = assemble_zpn(p, n, tp, law);
        auto t0 = std::chrono::steady_clock::now();
        serial = zpn_range(Z, lo, hi, 1);
        t_serial = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        parallel = zpn_range(Z, lo, hi, jobs);
        t_parallel = seconds_since(t0);
        std::cout << "tower pipeline, p=" << p << " n=" << n;
    }

    bool equal = same_results(serial, parallel);
    std::cout << ", degrees " << lo << ".." << hi << ", D=" << D << " E=" << E << " N=" << N
              << " I=" << I << " P=" << P << "\n";
    std::cout << "serial (jobs=1):    " << t_serial << " s\n";
    std::cout << "parallel (jobs=" << jobs << "): " << t_parallel << " s  (speedup "
              << (t_parallel > 0 ? t_serial / t_parallel : 0) << "x)\n";
    std::cout << "results: " << (equal ? "identical" : "DIFFER") << "\n";
    return equal ? 0 : 1;
}
