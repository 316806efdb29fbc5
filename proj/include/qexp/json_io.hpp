#pragma once

// Shared structured-text container: every file the toolkit reads or writes
// is a JSON object. Complex numbers are [re, im] pairs and matrices are
// arrays of rows of such pairs.

#include "qexp/linalg.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qexp {

using Json = nlohmann::ordered_json;
using JsonPath = std::vector<std::variant<std::string, std::size_t>>;

struct TextLocation {
    std::size_t line = 0;
    std::size_t column = 0;
};

// Location of the value addressed by path inside well-formed JSON text.
std::optional<TextLocation> locate(std::string_view text, const JsonPath &path);

std::string path_to_string(const JsonPath &path);

JsonPath operator/(JsonPath path, std::string key);
JsonPath operator/(JsonPath path, std::size_t index);

// Parsed document that keeps its source text for error locations.
class JsonDocument {
public:
    // Throws ParseError with line/column on malformed text or a non-object root.
    static JsonDocument parse(std::string text, std::string source = {}, std::filesystem::path base_dir = {});
    static JsonDocument load(const std::filesystem::path &file);

    const Json &root() const { return root_; }
    const std::string &source() const { return source_; }
    // Directory that relative paths inside the document resolve against.
    const std::filesystem::path &base_dir() const { return base_dir_; }

    [[noreturn]] void fail(const JsonPath &path, const std::string &message) const;

    const Json &at(const JsonPath &path) const;
    bool has(const JsonPath &path) const;

    int get_int(const JsonPath &path) const;
    double get_double(const JsonPath &path) const;
    bool get_bool(const JsonPath &path) const;
    std::string get_string(const JsonPath &path) const;
    cdouble get_complex(const JsonPath &path) const;
    Matrix get_matrix(const JsonPath &path) const;
    Vector get_complex_vector(const JsonPath &path) const;
    std::vector<int> get_int_list(const JsonPath &path) const;
    std::vector<double> get_double_list(const JsonPath &path) const;

    // Rejects object members outside `allowed`.
    void check_keys(const JsonPath &path, const std::vector<std::string_view> &allowed) const;

private:
    std::string text_;
    std::string source_;
    std::filesystem::path base_dir_;
    Json root_;
};

Json complex_to_json(cdouble z);
Json matrix_to_json(const Matrix &m);
Json vector_to_json(const Vector &v);

std::string read_text_file(const std::filesystem::path &file);
void write_text_file(const std::filesystem::path &file, const std::string &text);

// Canonical text form: two-space indentation, trailing newline.
std::string dump(const Json &json);

}  // namespace qexp
