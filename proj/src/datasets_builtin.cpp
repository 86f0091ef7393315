#include "srreg/dataset.hpp"
#include "srreg/errors.hpp"

namespace srreg {

namespace {

// Hertzsprung-Russell diagram of the star cluster CYG OB1: log effective
// surface temperature and log light intensity for 47 stars, as tabulated in
// Rousseeuw & Leroy, "Robust Regression and Outlier Detection" (1987).
constexpr const char* kStarCsv =
    "log_Te,log_light\n"
    "4.37,5.23\n4.56,5.74\n4.26,4.93\n4.56,5.74\n4.30,5.19\n"
    "4.46,5.46\n3.84,4.65\n4.57,5.27\n4.26,5.57\n4.37,5.12\n"
    "3.49,5.73\n4.43,5.45\n4.48,5.42\n4.01,4.05\n4.29,4.26\n"
    "4.42,4.58\n4.23,3.94\n4.42,4.18\n4.23,4.18\n3.49,5.89\n"
    "4.29,4.38\n4.29,4.22\n4.42,4.42\n4.49,4.85\n4.38,5.02\n"
    "4.42,4.66\n4.29,4.66\n4.38,4.90\n4.22,4.39\n3.48,6.05\n"
    "4.38,4.42\n4.56,5.10\n4.45,5.22\n3.49,6.29\n4.23,4.34\n"
    "4.62,5.62\n4.53,5.10\n4.45,5.22\n4.53,5.18\n4.43,5.57\n"
    "4.38,4.62\n4.45,5.06\n4.50,5.34\n4.45,5.34\n4.55,5.54\n"
    "4.45,4.98\n4.42,4.50\n";

// Artificial data of Hawkins, Bradu & Kass (1984): 75 observations, three
// carriers. Observations 1-10 are bad leverage points, 11-14 good leverage.
constexpr const char* kHbkCsv =
    "x1,x2,x3,y\n"
    "10.1,19.6,28.3,9.7\n9.5,20.5,28.9,10.1\n10.7,20.2,31.0,10.3\n"
    "9.9,21.5,31.7,9.5\n10.3,21.1,31.1,10.0\n10.8,20.4,29.2,10.0\n"
    "10.5,20.9,29.1,10.8\n9.9,19.6,28.8,10.3\n9.7,20.7,31.0,9.6\n"
    "9.3,19.7,30.3,9.9\n11.0,24.0,35.0,-0.2\n12.0,23.0,37.0,-0.4\n"
    "12.0,26.0,34.0,0.7\n11.0,34.0,34.0,0.1\n3.4,2.9,2.1,-0.4\n"
    "3.1,2.2,0.3,0.6\n0.0,1.6,0.2,-0.2\n2.3,1.6,2.0,0.0\n"
    "0.8,2.9,1.6,0.1\n3.1,3.4,2.2,0.4\n2.6,2.2,1.9,0.9\n"
    "0.4,3.2,1.9,0.3\n2.0,2.3,0.8,-0.8\n1.3,2.3,0.5,0.7\n"
    "1.0,0.0,0.4,-0.3\n0.9,3.3,2.5,-0.8\n3.3,2.5,2.9,-0.7\n"
    "1.8,0.8,2.0,0.3\n1.2,0.9,0.8,0.3\n1.2,0.7,3.4,-0.3\n"
    "3.1,1.4,1.0,0.0\n0.5,2.4,0.3,-0.4\n1.5,3.1,1.5,-0.6\n"
    "0.4,0.0,0.7,-0.7\n3.1,2.4,3.0,0.3\n1.1,2.2,2.7,-1.0\n"
    "0.1,3.0,2.6,-0.6\n1.5,1.2,0.2,0.9\n2.1,0.0,1.2,-0.7\n"
    "0.5,2.0,1.2,-0.5\n3.4,1.6,2.9,-0.1\n0.3,1.0,2.7,-0.7\n"
    "0.1,3.3,0.9,0.6\n1.8,0.5,3.2,-0.7\n1.9,0.1,0.6,-0.5\n"
    "1.8,0.5,3.0,-0.4\n3.0,0.1,0.8,-0.9\n3.1,1.6,3.0,0.1\n"
    "3.1,2.5,1.9,0.9\n2.1,2.8,2.9,-0.4\n2.3,1.5,0.4,0.7\n"
    "3.3,0.6,1.2,-0.5\n0.3,0.4,3.3,0.7\n1.1,3.0,0.3,0.7\n"
    "0.5,2.4,0.9,0.0\n1.8,3.2,0.9,0.1\n1.8,0.7,0.7,0.7\n"
    "2.4,3.4,1.5,-0.1\n1.6,2.1,3.0,-0.3\n0.3,1.5,3.3,-0.9\n"
    "0.4,3.4,3.0,-0.3\n0.9,0.1,0.3,0.6\n1.1,2.7,0.2,-0.3\n"
    "2.8,3.0,2.9,-0.5\n2.0,0.7,2.7,0.6\n0.2,1.8,0.8,-0.9\n"
    "1.6,2.0,1.2,-0.7\n0.1,0.0,1.1,0.6\n2.0,0.6,0.3,0.2\n"
    "1.0,2.2,2.9,0.7\n2.2,2.5,2.3,0.2\n0.6,2.0,1.5,-0.2\n"
    "0.3,1.7,2.2,0.4\n0.0,2.2,1.6,-0.9\n0.3,0.4,2.6,0.2\n";

}  // namespace

std::vector<std::string> builtin_dataset_names() { return {"star", "hbk"}; }

Dataset builtin_dataset(const std::string& name) {
    CsvOptions opts;
    opts.header = true;
    if (name == "star") return parse_csv(kStarCsv, opts);
    if (name == "hbk") return parse_csv(kHbkCsv, opts);
    std::string avail;
    for (const auto& n : builtin_dataset_names()) {
        if (!avail.empty()) avail += ", ";
        avail += n;
    }
    throw ValidationError("unknown dataset '" + name + "'; available: " + avail);
}

}  // namespace srreg
