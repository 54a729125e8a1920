#include "l2relax/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "l2relax/error.hpp"

namespace l2relax {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(',', pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

LabeledMatrix parse_csv(std::string_view text, std::string_view source) {
    const std::string where(source);
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find('\n', pos);
        const std::string_view line = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!line.empty()) lines.push_back(line);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (lines.empty()) fail(ErrorKind::Parse, where + ": empty file");

    LabeledMatrix out;
    for (const auto h : split(lines.front())) {
        if (h.empty()) fail(ErrorKind::Parse, where + ": empty header field");
        double probe = 0.0;
        const auto res = std::from_chars(h.data(), h.data() + h.size(), probe);
        if (res.ec == std::errc() && res.ptr == h.data() + h.size())
            fail(ErrorKind::Parse, where + ": header row is required (first row is numeric)");
        out.labels.emplace_back(h);
    }
    const auto cols = static_cast<Eigen::Index>(out.labels.size());
    out.values.resize(static_cast<Eigen::Index>(lines.size()) - 1, cols);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split(lines[r]);
        if (static_cast<Eigen::Index>(fields.size()) != cols)
            fail(ErrorKind::Parse, where + ": line " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                                       " fields, expected " + std::to_string(cols));
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto f = fields[static_cast<std::size_t>(c)];
            double v = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v))
                fail(ErrorKind::Parse, where + ": line " + std::to_string(r + 1) + ": '" + std::string(f) +
                                           "' is not a finite number");
            out.values(static_cast<Eigen::Index>(r) - 1, c) = v;
        }
    }
    return out;
}

LabeledMatrix read_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), file.string());
}

Panel read_panel_csv(const std::filesystem::path& file, std::string_view target) {
    const LabeledMatrix m = read_csv(file);
    Panel p;
    Eigen::Index target_col = -1;
    for (std::size_t c = 0; c < m.labels.size(); ++c)
        if (m.labels[c] == target) target_col = static_cast<Eigen::Index>(c);
    const Eigen::Index units = m.values.cols() - (target_col >= 0 ? 1 : 0);
    p.values.resize(m.values.rows(), units);
    Eigen::Index j = 0;
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
        if (c == target_col) continue;
        p.values.col(j++) = m.values.col(c);
        p.unit_labels.push_back(m.labels[static_cast<std::size_t>(c)]);
    }
    if (target_col >= 0) p.target = m.values.col(target_col);
    p.validate();
    return p;
}

CovEstimate read_covariance_csv(const std::filesystem::path& file) {
    const LabeledMatrix m = read_csv(file);
    if (m.values.rows() != m.values.cols())
        fail(ErrorKind::Parse, file.string() + ": covariance CSV must be square with one header per column");
    if (!is_symmetric(m.values)) fail(ErrorKind::InvalidSpec, file.string() + ": covariance matrix is not symmetric");
    CovEstimate cov;
    cov.sigma = 0.5 * (m.values + m.values.transpose());
    cov.estimator = Estimator::Sample;
    return cov;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& values) {
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
    out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
        out << '\n';
    }
}

}  // namespace l2relax
