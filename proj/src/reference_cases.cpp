#include "reference_cases.hpp"

namespace bulkq::cases {

ValidatedModel ex1(VacationSpec::Mode mode) {
    BatchArrivalSpec arrival;
    arrival.lambda = 0.055;
    arrival.g = {0.25, 0.25, 0.25, 0.25};

    ServicePolicy service;
    service.a = 8;
    service.b = 15;
    for (int i = 8; i <= 15; ++i) {
        double theta = 0.2 / (i - 7);
        std::vector<std::vector<double>> T = {{1.0 - theta, theta, 0.0},
                                              {0.0, 1.0 - theta, theta},
                                              {0.0, 0.0, 1.0 - theta}};
        service.dists.push_back(ServiceTimeDist::phase_type({0.25, 0.25, 0.5}, T));
    }

    VacationSpec vac;
    vac.mode = mode;
    vac.dist = ServiceTimeDist::geometric(0.4);
    return validate_model(arrival, service, vac);
}

ValidatedModel ex2(VacationSpec::Mode mode) {
    BatchArrivalSpec arrival;
    arrival.lambda = 0.10;
    arrival.g = {0.5, 0.0, 0.0, 0.0, 0.5};

    ServicePolicy service;
    service.a = 15;
    service.b = 25;
    for (int i = 15; i <= 25; ++i)
        service.dists.push_back(ServiceTimeDist::neg_binomial(3, 3.0 / (2.0 * i - 20.0)));

    VacationSpec vac;
    vac.mode = mode;
    vac.dist = ServiceTimeDist::geometric(0.2);
    return validate_model(arrival, service, vac);
}

ValidatedModel by_name(const std::string& kind, VacationSpec::Mode mode) {
    if (kind == "ex1") return ex1(mode);
    if (kind == "ex2") return ex2(mode);
    raise(errc::bad_input, "unknown reference case: " + kind);
}

} // namespace bulkq::cases
