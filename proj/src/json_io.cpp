#include "qexp/json_io.hpp"

#include "qexp/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qexp {

namespace {

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    }

    std::string read_string() {
        std::string out;
        ++pos;  // opening quote
        while (pos < text.size() && text[pos] != '"') {
            if (text[pos] == '\\' && pos + 1 < text.size()) {
                out.push_back(text[pos]);
                ++pos;
            }
            out.push_back(text[pos]);
            ++pos;
        }
        ++pos;  // closing quote
        return out;
    }

    void skip_value() {
        skip_ws();
        if (pos >= text.size()) {
            return;
        }
        const char c = text[pos];
        if (c == '"') {
            read_string();
            return;
        }
        if (c == '{' || c == '[') {
            int depth = 0;
            while (pos < text.size()) {
                const char d = text[pos];
                if (d == '"') {
                    read_string();
                    continue;
                }
                if (d == '{' || d == '[') {
                    ++depth;
                } else if (d == '}' || d == ']') {
                    --depth;
                    if (depth == 0) {
                        ++pos;
                        return;
                    }
                }
                ++pos;
            }
            return;
        }
        while (pos < text.size() && text[pos] != ',' && text[pos] != '}' && text[pos] != ']' &&
               !std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    }

    // Moves pos to the start of the member value named key; false if absent.
    bool enter_member(const std::string &key) {
        skip_ws();
        if (pos >= text.size() || text[pos] != '{') {
            return false;
        }
        ++pos;
        while (true) {
            skip_ws();
            if (pos >= text.size() || text[pos] == '}') {
                return false;
            }
            const std::string name = read_string();
            skip_ws();
            ++pos;  // colon
            skip_ws();
            if (name == key) {
                return true;
            }
            skip_value();
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
            }
        }
    }

    bool enter_element(std::size_t index) {
        skip_ws();
        if (pos >= text.size() || text[pos] != '[') {
            return false;
        }
        ++pos;
        for (std::size_t i = 0;; ++i) {
            skip_ws();
            if (pos >= text.size() || text[pos] == ']') {
                return false;
            }
            if (i == index) {
                return true;
            }
            skip_value();
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
            }
        }
    }
};

TextLocation offset_to_location(std::string_view text, std::size_t offset) {
    TextLocation loc{1, 1};
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

}  // namespace

std::optional<TextLocation> locate(std::string_view text, const JsonPath &path) {
    Scanner s{text};
    for (const auto &elem : path) {
        const bool found = std::holds_alternative<std::string>(elem)
                               ? s.enter_member(std::get<std::string>(elem))
                               : s.enter_element(std::get<std::size_t>(elem));
        if (!found) {
            return std::nullopt;
        }
    }
    s.skip_ws();
    return offset_to_location(text, s.pos);
}

std::string path_to_string(const JsonPath &path) {
    std::string out;
    for (const auto &elem : path) {
        if (std::holds_alternative<std::string>(elem)) {
            if (!out.empty()) {
                out += '.';
            }
            out += std::get<std::string>(elem);
        } else {
            out += '[' + std::to_string(std::get<std::size_t>(elem)) + ']';
        }
    }
    return out.empty() ? "<root>" : out;
}

JsonPath operator/(JsonPath path, std::string key) {
    path.emplace_back(std::move(key));
    return path;
}

JsonPath operator/(JsonPath path, std::size_t index) {
    path.emplace_back(index);
    return path;
}

JsonDocument JsonDocument::parse(std::string text, std::string source, std::filesystem::path base_dir) {
    JsonDocument doc;
    doc.text_ = std::move(text);
    doc.source_ = std::move(source);
    doc.base_dir_ = std::move(base_dir);
    try {
        doc.root_ = Json::parse(doc.text_);
    } catch (const Json::parse_error &e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const auto loc = offset_to_location(doc.text_, offset);
        std::string what = e.what();
        // nlohmann prefixes "[json.exception.parse_error.101] parse error at line L, column C: ".
        if (const auto colon = what.find(": "); colon != std::string::npos) {
            what = what.substr(colon + 2);
        }
        throw ParseError((doc.source_.empty() ? "" : doc.source_ + ": ") + "syntax error: " + what, loc.line,
                         loc.column);
    }
    if (!doc.root_.is_object()) {
        doc.fail({}, "top-level value must be an object");
    }
    return doc;
}

JsonDocument JsonDocument::load(const std::filesystem::path &file) {
    return parse(read_text_file(file), file.string(), file.parent_path());
}

void JsonDocument::fail(const JsonPath &path, const std::string &message) const {
    // Point at the deepest prefix of the path that exists in the text.
    JsonPath prefix = path;
    std::optional<TextLocation> loc;
    while (true) {
        loc = locate(text_, prefix);
        if (loc || prefix.empty()) {
            break;
        }
        prefix.pop_back();
    }
    const std::string where = (source_.empty() ? "" : source_ + ": ") + path_to_string(path) + ": ";
    if (loc) {
        throw ParseError(where + message, loc->line, loc->column);
    }
    throw ParseError(where + message);
}

bool JsonDocument::has(const JsonPath &path) const {
    const Json *node = &root_;
    for (const auto &elem : path) {
        if (std::holds_alternative<std::string>(elem)) {
            if (!node->is_object() || !node->contains(std::get<std::string>(elem))) {
                return false;
            }
            node = &(*node)[std::get<std::string>(elem)];
        } else {
            const auto i = std::get<std::size_t>(elem);
            if (!node->is_array() || i >= node->size()) {
                return false;
            }
            node = &(*node)[i];
        }
    }
    return true;
}

const Json &JsonDocument::at(const JsonPath &path) const {
    const Json *node = &root_;
    JsonPath walked;
    for (const auto &elem : path) {
        if (std::holds_alternative<std::string>(elem)) {
            const auto &key = std::get<std::string>(elem);
            if (!node->is_object()) {
                fail(walked, "expected an object");
            }
            if (!node->contains(key)) {
                fail(walked, "missing required field '" + key + "'");
            }
            node = &(*node)[key];
        } else {
            const auto i = std::get<std::size_t>(elem);
            if (!node->is_array()) {
                fail(walked, "expected an array");
            }
            if (i >= node->size()) {
                fail(walked, "index " + std::to_string(i) + " out of range");
            }
            node = &(*node)[i];
        }
        walked.push_back(elem);
    }
    return *node;
}

int JsonDocument::get_int(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<int>();
}

double JsonDocument::get_double(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

bool JsonDocument::get_bool(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_boolean()) {
        fail(path, "expected true or false");
    }
    return v.get<bool>();
}

std::string JsonDocument::get_string(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_string()) {
        fail(path, "expected a string");
    }
    return v.get<std::string>();
}

cdouble JsonDocument::get_complex(const JsonPath &path) const {
    const Json &v = at(path);
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(path, "expected a complex number [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

Matrix JsonDocument::get_matrix(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_array() || v.empty()) {
        fail(path, "expected a matrix given as a nonempty array of rows");
    }
    const auto rows = v.size();
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].empty()) {
            fail(path / i, "expected a row of [re, im] pairs");
        }
        if (i == 0) {
            cols = v[i].size();
        } else if (v[i].size() != cols) {
            fail(path / i, "row has " + std::to_string(v[i].size()) + " entries, expected " + std::to_string(cols));
        }
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = get_complex(path / i / j);
        }
    }
    return m;
}

Vector JsonDocument::get_complex_vector(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_array() || v.empty()) {
        fail(path, "expected a nonempty array of [re, im] pairs");
    }
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = get_complex(path / i);
    }
    return out;
}

std::vector<int> JsonDocument::get_int_list(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_array()) {
        fail(path, "expected an array of integers");
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_int(path / i));
    }
    return out;
}

std::vector<double> JsonDocument::get_double_list(const JsonPath &path) const {
    const Json &v = at(path);
    if (!v.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_double(path / i));
    }
    return out;
}

void JsonDocument::check_keys(const JsonPath &path, const std::vector<std::string_view> &allowed) const {
    const Json &v = at(path);
    if (!v.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto &[key, value] : v.items()) {
        bool ok = false;
        for (auto a : allowed) {
            ok = ok || a == key;
        }
        if (!ok) {
            fail(path / std::string(key), "unknown field '" + std::string(key) + "'");
        }
    }
}

Json complex_to_json(cdouble z) {
    return Json::array({z.real(), z.imag()});
}

Json matrix_to_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_to_json(const Vector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v(i)));
    }
    return out;
}

std::string read_text_file(const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path &file, const std::string &text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + file.string());
    }
    out << text;
}

std::string dump(const Json &json) {
    return json.dump(2) + "\n";
}

}  // namespace qexp
