// Minimal library walkthrough: steady state, covariance, coherence budget.

#include <iostream>

#include "omcoh/gaussian.hpp"
#include "omcoh/steady.hpp"

int main() {
    omcoh::SystemParams p;
    p.gamma_m = 0.01;
    p.kappa = 0.1;
    p.delta0 = 1.0;
    p.g0 = 5e-4;
    p.drive_e = 300.0;
    p.n_th = 10.0;

    const omcoh::SteadyAnalysis analysis = omcoh::steady_covariance(p);
    std::cout << "cavity photons: " << analysis.steady.n_c
              << ", effective detuning: " << analysis.steady.delta_eff << "\n";
    std::cout << "steady covariance:\n" << analysis.cov.v << "\n";

    const omcoh::CoherenceReport r = omcoh::coherence_difference(analysis.state());
    std::cout << "c_mec = " << r.c_mec << " nats\n"
              << "c_opt = " << r.c_opt << " nats\n"
              << "c_tot = " << r.c_tot << " nats\n"
              << "delta_c = " << r.delta_c << " (mutual information "
              << r.mutual_info << ")\n";
    return 0;
}
