#include "impq/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "impq/errors.hpp"
#include "impq/matrix_json.hpp"

namespace impq {

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
    const std::string text = matrix_to_json(m).dump() + "\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path.string() + ": write failed");
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": not valid JSON (" + e.what() + ")");
    }
    try {
        return matrix_from_json(doc);
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace impq
