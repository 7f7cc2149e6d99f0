#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "lti/gram.hpp"
#include "lti/signals.hpp"

namespace lti {

// All CSV files are UTF-8, LF line endings, '.' decimal separator.

std::string format_double(double v);  // shortest round-trip representation

PiecewiseConstantSignal read_signal_csv(const std::string& path);   // t,level
void write_signal_csv(const std::string& path, const PiecewiseConstantSignal& u);

Dataset read_dataset_csv(const std::string& path);                  // t,y
void write_dataset_csv(const std::string& path, const Dataset& data);

// t_i,c_i rows preceded by '#'-comment metadata (kernel spec string, lambda).
void write_model_csv(const std::string& path, const std::string& spec_text,
                     double lambda, const std::vector<double>& times,
                     const Eigen::VectorXd& c);

void write_gram_csv(const std::string& path, const GramMatrix& K);  // i,j,value

// k,omega,d_k
void write_weights_csv(const std::string& path,
                       const std::vector<double>& omegas,
                       const Eigen::VectorXd& d);

// Generic two-column curve, e.g. header "t,h" or "t,y".
void write_curve_csv(const std::string& path, const std::string& header,
                     const std::vector<double>& x, const std::vector<double>& y);

// Plain-text "key = value" config lines with '#' comments.  Returned in file
// order; duplicate keys are errors (caught by the consumers' known-key check).
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::string& path);

}  // namespace lti
