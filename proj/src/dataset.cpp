#include "trigsvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "trigsvm/random.hpp"

namespace trigsvm {

Dataset Dataset::subset(std::span<const Index> rows) const {
    Dataset out;
    out.kind = kind;
    out.feature_names = feature_names;
    out.provenance = provenance;
    out.label_names = label_names;
    out.features.resize(static_cast<Index>(rows.size()), dimension());
    out.target.resize(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Index r = rows[k];
        if (r < 0 || r >= size()) throw Error(ErrorKind::shape, "subset row index out of range");
        out.features.row(static_cast<Index>(k)) = features.row(r);
        out.target(static_cast<Index>(k)) = target(r);
    }
    return out;
}

void Dataset::validate() const {
    if (target.size() != features.rows()) {
        throw Error(ErrorKind::shape, "target length differs from the number of feature rows");
    }
    if (!features.allFinite() || !target.allFinite()) {
        throw Error(ErrorKind::data, "dataset contains non-finite values");
    }
    if (kind == TargetKind::labels) {
        for (Index i = 0; i < target.size(); ++i) {
            if (target(i) != 1.0 && target(i) != -1.0) {
                throw Error(ErrorKind::label, "classification labels must be -1 or +1");
            }
        }
    }
}

Eigen::VectorXd ScalingStats::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dimension()) {
        throw Error(ErrorKind::shape, "scaling expects dimension " + std::to_string(dimension()));
    }
    Eigen::VectorXd out = x;
    for (Index k = 0; k < x.size(); ++k) {
        if (!constant[static_cast<std::size_t>(k)]) out(k) = (x(k) - mean(k)) / stddev(k);
    }
    return out;
}

Eigen::MatrixXd ScalingStats::apply_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    if (x.cols() != dimension()) {
        throw Error(ErrorKind::shape, "scaling expects dimension " + std::to_string(dimension()));
    }
    Eigen::MatrixXd out = x;
    for (Index k = 0; k < x.cols(); ++k) {
        if (!constant[static_cast<std::size_t>(k)]) {
            out.col(k) = (x.col(k).array() - mean(k)) / stddev(k);
        }
    }
    return out;
}

ScalingStats fit_scaling(const Eigen::Ref<const Eigen::MatrixXd>& features) {
    if (features.rows() == 0) throw Error(ErrorKind::empty_input, "cannot fit scaling on no rows");
    const Index d = features.cols();
    ScalingStats stats{Eigen::VectorXd(d), Eigen::VectorXd(d), std::vector<bool>(d, false)};
    const auto n = static_cast<double>(features.rows());
    for (Index k = 0; k < d; ++k) {
        const double mean = features.col(k).mean();
        const double var = (features.col(k).array() - mean).square().sum() / n;
        const double sd = std::sqrt(var);
        stats.mean(k) = mean;
        stats.stddev(k) = sd;
        if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
            stats.constant[static_cast<std::size_t>(k)] = true;
            stats.stddev(k) = 1.0;
        }
    }
    return stats;
}

StandardizedPair standardize(const Dataset& train, const Dataset& test) {
    if (test.size() > 0 && train.dimension() != test.dimension()) {
        throw Error(ErrorKind::shape, "train and test differ in dimension");
    }
    StandardizedPair out{train, test, fit_scaling(train.features)};
    out.train.features = out.stats.apply_rows(train.features);
    if (test.size() > 0) out.test.features = out.stats.apply_rows(test.features);
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
    return value;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::vector<std::size_t>& line_numbers) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        rows.push_back(split_line(line));
        line_numbers.push_back(line_no);
    }
    return rows;
}

}  // namespace

bool csv_has_header(const std::filesystem::path& path) {
    std::vector<std::size_t> lines;
    const auto rows = read_rows(path, lines);
    if (rows.empty()) return false;
    return std::any_of(rows.front().begin(), rows.front().end(),
                       [](const std::string& c) { return !parse_number(c).has_value(); });
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::vector<std::size_t> line_numbers;
    auto rows = read_rows(path, line_numbers);

    Dataset data;
    data.kind = options.kind;
    data.provenance = "csv:" + path.string();

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        if (rows.empty()) throw Error(ErrorKind::empty_input, "'" + path.string() + "' is empty");
        header = rows.front();
        first_data = 1;
    }
    if (rows.size() <= first_data) {
        throw Error(ErrorKind::empty_input, "'" + path.string() + "' has no data rows");
    }
    const std::size_t columns = rows[first_data].size();
    if (options.has_header && header.size() != columns) {
        throw Error(ErrorKind::parse, "header has " + std::to_string(header.size()) +
                                          " columns but data has " + std::to_string(columns));
    }

    std::optional<std::size_t> label_col;
    if (!options.no_target) {
        if (options.label_column.empty()) {
            label_col = columns - 1;
        } else {
            if (!options.has_header) {
                throw Error(ErrorKind::invalid_parameter,
                            "a named label column requires a header row");
            }
            const auto it = std::find(header.begin(), header.end(), options.label_column);
            if (it == header.end()) {
                throw Error(ErrorKind::parse, "no column named '" + options.label_column + "'");
            }
            label_col = static_cast<std::size_t>(it - header.begin());
        }
        if (columns < 2) throw Error(ErrorKind::parse, "need at least one feature column");
    }

    const auto n = static_cast<Index>(rows.size() - first_data);
    const auto d = static_cast<Index>(columns - (label_col ? 1 : 0));
    data.features.resize(n, d);
    data.target.resize(label_col ? n : 0);
    for (std::size_t c = 0; c < columns; ++c) {
        if (label_col && c == *label_col) continue;
        data.feature_names.push_back(options.has_header ? header[c] : "x" + std::to_string(c + 1));
    }

    std::vector<std::string> raw_labels;
    for (Index r = 0; r < n; ++r) {
        const auto& cells = rows[first_data + static_cast<std::size_t>(r)];
        const auto line_no = line_numbers[first_data + static_cast<std::size_t>(r)];
        if (cells.size() != columns) {
            throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + " has " +
                                              std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(columns));
        }
        Index f = 0;
        for (std::size_t c = 0; c < columns; ++c) {
            if (label_col && c == *label_col) {
                raw_labels.push_back(cells[c]);
                continue;
            }
            const auto value = parse_number(cells[c]);
            if (!value || !std::isfinite(*value)) {
                throw Error(ErrorKind::parse, "line " + std::to_string(line_no) + ", column " +
                                                  std::to_string(c + 1) + ": cannot read '" +
                                                  cells[c] + "' as a finite number");
            }
            data.features(r, f++) = *value;
        }
    }

    if (!label_col) {
        data.kind = TargetKind::real;
        return data;
    }

    if (options.kind == TargetKind::real) {
        for (Index r = 0; r < n; ++r) {
            const auto value = parse_number(raw_labels[static_cast<std::size_t>(r)]);
            if (!value || !std::isfinite(*value)) {
                throw Error(ErrorKind::parse,
                            "line " + std::to_string(line_numbers[first_data + r]) +
                                ": target '" + raw_labels[static_cast<std::size_t>(r)] +
                                "' is not a finite number");
            }
            data.target(r) = *value;
        }
        return data;
    }

    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    const bool already_signed = std::all_of(distinct.begin(), distinct.end(), [](const auto& s) {
        const auto v = parse_number(s);
        return v && (*v == 1.0 || *v == -1.0);
    });
    if (already_signed) {
        for (Index r = 0; r < n; ++r) data.target(r) = *parse_number(raw_labels[r]);
        return data;
    }
    if (distinct.size() != 2) {
        throw Error(ErrorKind::label, "classification needs exactly two distinct labels, found " +
                                          std::to_string(distinct.size()));
    }
    std::string low = *distinct.begin();
    std::string high = *std::next(distinct.begin());
    const auto low_num = parse_number(low);
    const auto high_num = parse_number(high);
    if (low_num && high_num && *high_num < *low_num) std::swap(low, high);
    for (Index r = 0; r < n; ++r) {
        data.target(r) = raw_labels[static_cast<std::size_t>(r)] == low ? -1.0 : 1.0;
    }
    data.label_names = std::make_pair(low, high);
    return data;
}

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::string& target_name) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    const bool with_target = data.target.size() == data.size();
    for (Index k = 0; k < data.dimension(); ++k) {
        if (k > 0) out << ',';
        out << (static_cast<std::size_t>(k) < data.feature_names.size()
                    ? data.feature_names[static_cast<std::size_t>(k)]
                    : "x" + std::to_string(k + 1));
    }
    if (with_target) out << ',' << target_name;
    out << '\n';
    for (Index i = 0; i < data.size(); ++i) {
        for (Index k = 0; k < data.dimension(); ++k) {
            if (k > 0) out << ',';
            out << format_double(data.features(i, k));
        }
        if (with_target) out << ',' << format_double(data.target(i));
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed while writing '" + path.string() + "'");
}

Dataset gen_circles(Index n, std::uint64_t seed, double inner_radius, double outer_radius,
                    double noise) {
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorKind::invalid_parameter, "circles need an even sample count >= 4");
    }
    if (!(noise >= 0.0)) throw Error(ErrorKind::invalid_parameter, "noise must be >= 0");
    SplitMix64 rng(seed);
    Dataset data;
    data.features.resize(n, 2);
    data.target.resize(n);
    data.feature_names = {"x1", "x2"};
    data.provenance = "circles(n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")";
    for (Index i = 0; i < n; ++i) {
        const bool inner = i % 2 == 0;
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        const double radius = (inner ? inner_radius : outer_radius) + noise * rng.normal();
        data.features(i, 0) = radius * std::cos(angle);
        data.features(i, 1) = radius * std::sin(angle);
        data.target(i) = inner ? 1.0 : -1.0;
    }
    return data;
}

double damped_sine(double x) { return std::sin(x) * std::exp(-0.2 * x); }

SineSample gen_svr_sine(Index n, std::uint64_t seed, double noise_scale) {
    if (n < 2) throw Error(ErrorKind::invalid_parameter, "sine sample needs n >= 2");
    if (!(noise_scale >= 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "noise scale must be >= 0");
    }
    SplitMix64 rng(seed);
    SineSample s{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Index i = 0; i < n; ++i) {
        s.x(i) = 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        s.y_true(i) = damped_sine(s.x(i));
        s.y_noisy(i) = s.y_true(i) + noise_scale * rng.normal();
    }
    return s;
}

Dataset SineSample::as_dataset() const {
    Dataset data;
    data.kind = TargetKind::real;
    data.features = x;
    data.target = y_noisy;
    data.feature_names = {"x"};
    data.provenance = "damped-sine";
    return data;
}

}  // namespace trigsvm
