// dataset_io.cpp — Dataset text format and key-value configuration files

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qbat/datagen.hpp"
#include "qbat/errors.hpp"

namespace qbat {

const std::array<const char*, 21> kDatasetColumns = {
    "T_c", "T_h", "T_l", "tau", "p_c", "p_h", "eps", "eps_b", "eps_a", "F", "Q_c",
    "eta", "C1", "C2", "C3", "C4", "Q_h", "W", "ratio", "group_id", "flags"};

namespace {

constexpr std::size_t kNumericColumns = 19;

void append_number(std::string& line, double v)
{
    if (std::isnan(v)) return;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    line.append(buf, res.ptr);
}

double parse_number(const std::string& field, std::size_t line_no, const char* column)
{
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": column " + column +
                                           " is not a number: '" + field + "'");
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw Error(ErrorKind::Schema, "config key '" + key + "': not a number: '" + text + "'");
    }
    return v;
}

std::uint64_t to_seed(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw Error(ErrorKind::Schema, "config key '" + key + "': not an unsigned integer: '" + text + "'");
    }
    return v;
}

Range to_range(const std::string& key, const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw Error(ErrorKind::Schema, "config key '" + key + "': expected 'low,high'");
    }
    return {to_double(key, text.substr(0, comma)), to_double(key, text.substr(comma + 1))};
}

} // namespace

void write_dataset(const Dataset& data, std::ostream& out)
{
    std::string line;
    for (std::size_t i = 0; i < kDatasetColumns.size(); ++i) {
        if (i) line += ',';
        line += kDatasetColumns[i];
    }
    out << line << '\n';
    for (const auto& r : data) {
        line.clear();
        const double values[kNumericColumns] = {
            r.T_c, r.T_h, r.T_ell, r.tau, r.p_c, r.p_h, r.eps, r.eps_b, r.eps_a, r.F,
            r.Q_c, r.eta, r.C[0], r.C[1], r.C[2], r.C[3], r.Q_h, r.W, r.ratio};
        for (double v : values) {
            append_number(line, v);
            line += ',';
        }
        line += std::to_string(r.group_id);
        line += ',';
        line += flags_to_string(r.flags);
        out << line << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write_dataset: stream write failed");
}

void write_dataset(const Dataset& data, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "write_dataset: cannot open '" + path + "'");
    write_dataset(data, out);
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write_dataset: write to '" + path + "' failed");
}

Dataset read_dataset(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "read_dataset: missing header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_fields(line);

    std::array<std::size_t, kDatasetColumns.size()> index{};
    for (std::size_t c = 0; c < kDatasetColumns.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), kDatasetColumns[c]);
        if (it == header.end()) {
            throw Error(ErrorKind::Schema, std::string("read_dataset: missing column '") +
                                               kDatasetColumns[c] + "'");
        }
        index[c] = static_cast<std::size_t>(it - header.begin());
    }

    Dataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::Schema, "read_dataset: line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(header.size()));
        }
        double v[kNumericColumns];
        for (std::size_t c = 0; c < kNumericColumns; ++c) {
            v[c] = parse_number(fields[index[c]], line_no, kDatasetColumns[c]);
        }
        DatasetRecord r;
        r.T_c = v[0];
        r.T_h = v[1];
        r.T_ell = v[2];
        r.tau = v[3];
        r.p_c = v[4];
        r.p_h = v[5];
        r.eps = v[6];
        r.eps_b = v[7];
        r.eps_a = v[8];
        r.F = v[9];
        r.Q_c = v[10];
        r.eta = v[11];
        r.C = {v[12], v[13], v[14], v[15]};
        r.Q_h = v[16];
        r.W = v[17];
        r.ratio = v[18];
        const std::string& gid = fields[index[19]];
        const auto res = std::from_chars(gid.data(), gid.data() + gid.size(), r.group_id);
        if (gid.empty() || res.ec != std::errc() || res.ptr != gid.data() + gid.size()) {
            throw Error(ErrorKind::Schema, "read_dataset: line " + std::to_string(line_no) +
                                               ": bad group_id '" + gid + "'");
        }
        r.flags = flags_from_string(fields[index[20]]);
        data.push_back(r);
    }
    return data;
}

Dataset read_dataset(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "read_dataset: cannot open '" + path + "'");
    return read_dataset(in);
}

KeyValues parse_key_values(std::istream& in)
{
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Schema, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues load_key_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
    return parse_key_values(in);
}

BatteryParams params_from(const KeyValues& kv, BatteryParams p)
{
    const std::pair<const char*, double*> fields[] = {
        {"T_c", &p.T_c}, {"T_h", &p.T_h}, {"T_l", &p.T_ell}, {"T_ell", &p.T_ell},
        {"eps", &p.eps}, {"eps_b", &p.eps_b}, {"eps_a", &p.eps_a}, {"p_c", &p.p_c},
        {"p_h", &p.p_h}, {"tau", &p.tau}, {"r", &p.r}, {"g", &p.g}};
    for (const auto& [key, value] : kv) {
        bool known = false;
        for (const auto& [name, target] : fields) {
            if (key == name) {
                *target = to_double(key, value);
                known = true;
            }
        }
        if (!known) throw Error(ErrorKind::Schema, "unknown parameter key '" + key + "'");
    }
    return p;
}

SweepConfig sweep_config_from(const KeyValues& kv, SweepConfig c)
{
    const std::pair<const char*, Range*> ranges[] = {
        {"T_c", &c.T_c}, {"T_h", &c.T_h}, {"T_l", &c.T_ell}, {"T_ell", &c.T_ell},
        {"p_c", &c.p_c}, {"p_h", &c.p_h}, {"tau", &c.tau}, {"eps", &c.eps}, {"gap", &c.gap}};
    for (const auto& [key, value] : kv) {
        bool known = false;
        for (const auto& [name, target] : ranges) {
            if (key == name) {
                *target = to_range(key, value);
                known = true;
            }
        }
        if (known) continue;
        if (key == "values_per_param") c.values_per_param = static_cast<int>(to_double(key, value));
        else if (key == "seed") c.seed = to_seed(key, value);
        else if (key == "r") c.r = to_double(key, value);
        else if (key == "g") c.g = to_double(key, value);
        else if (key == "variant") c.variant = parse_variant(trim(value));
        else if (key == "workers") c.workers = static_cast<int>(to_double(key, value));
        else if (key == "out") c.output_path = trim(value);
        else if (key == "step") c.cumulant_options.step = to_double(key, value);
        else throw Error(ErrorKind::Schema, "unknown sweep config key '" + key + "'");
    }
    return c;
}

} // namespace qbat
