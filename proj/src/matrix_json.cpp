#include "impq/matrix_json.hpp"

#include <cmath>
#include <string>

namespace impq {

namespace {

std::string at(std::size_t i, std::size_t j) {
    return "entries[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix_to_json", m.rows(), m.cols());
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Complex z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw SchemaError("matrix_to_json: non-finite entry at " +
                                  at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            }
            row.push_back({z.real(), z.imag()});
        }
        rows.push_back(std::move(row));
    }
    return {{"dim", m.rows()}, {"entries", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("matrix document must be a JSON object");
    if (!j.contains("dim")) throw SchemaError("missing field \"dim\"");
    const auto& dim = j["dim"];
    if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
        throw SchemaError("\"dim\" must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(dim.get<long long>());
    if (!j.contains("entries")) throw SchemaError("missing field \"entries\"");
    const auto& rows = j["entries"];
    if (!rows.is_array()) throw SchemaError("\"entries\" must be an array of rows");
    if (rows.size() != n) {
        throw SchemaError("\"entries\" has " + std::to_string(rows.size()) + " rows, expected " +
                          std::to_string(n));
    }
    ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n) {
            throw SchemaError("entries[" + std::to_string(i) + "] must be an array of " +
                              std::to_string(n) + " entries (matrix must be square)");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const auto& z = row[k];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
                throw SchemaError(at(i, k) + " must be a [re, im] pair of numbers");
            }
            const double re = z[0].get<double>();
            const double im = z[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) throw SchemaError(at(i, k) + " is not finite");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {re, im};
        }
    }
    return m;
}

}  // namespace impq
