#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "rpca/datasets.hpp"

#include "rpca/errors.hpp"

#include <httplib.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace rpca {

const Eigen::MatrixXd& iris_measurements() {
    static const Eigen::MatrixXd X = [] {
        Eigen::MatrixXd m(150, 4);
        for (int i = 0; i < 150; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = detail::kIrisValues[i][j];
        return m;
    }();
    return X;
}

const std::vector<std::string>& iris_species() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> v;
        v.reserve(150);
        for (int i = 0; i < 150; ++i) v.emplace_back(detail::kIrisSpecies[i]);
        return v;
    }();
    return labels;
}

Eigen::MatrixXd iris_projection_subset(int contaminants_per_class) {
    if (contaminants_per_class < 0 || contaminants_per_class > 50)
        throw InvalidArgumentError("iris_projection_subset: count outside [0, 50]");
    const Eigen::MatrixXd& X = iris_measurements();
    const std::vector<std::string>& species = iris_species();
    std::vector<int> rows;
    int versicolor = 0, virginica = 0;
    for (int i = 0; i < 150; ++i) {
        if (species[i] == "setosa") {
            rows.push_back(i);
        } else if (species[i] == "versicolor" && versicolor < contaminants_per_class) {
            rows.push_back(i);
            ++versicolor;
        } else if (species[i] == "virginica" && virginica < contaminants_per_class) {
            rows.push_back(i);
            ++virginica;
        }
    }
    Eigen::MatrixXd subset(rows.size(), 4);
    for (std::size_t i = 0; i < rows.size(); ++i) subset.row(i) = X.row(rows[i]);
    return subset;
}

fs::path data_cache_dir() {
    if (const char* env = std::getenv("RPCA_DATA_DIR"); env && *env) return fs::path(env);
    return fs::path("data");
}

const std::vector<RemoteDataset>& remote_datasets() {
    static const std::vector<RemoteDataset> specs = {
        {"no2", {"http://lib.stat.cmu.edu/datasets/NO2.dat"}, "no2.dat"},
        {"bus",
         {
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xaa.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xab.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xac.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xad.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xae.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xaf.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xag.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xah.dat",
             "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/vehicle/xai.dat",
         },
         "vehicle.dat"},
    };
    return specs;
}

namespace {

const RemoteDataset& find_dataset(const std::string& name) {
    for (const auto& spec : remote_datasets())
        if (spec.name == name) return spec;
    throw InvalidArgumentError("unknown dataset '" + name + "'");
}

std::string http_get(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw DatasetError("malformed url '" + url + "'");
    const auto host_begin = scheme_end + 3;
    const auto path_begin = url.find('/', host_begin);
    const std::string base = url.substr(0, path_begin);
    const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
    httplib::Client client(base);
    client.set_connection_timeout(15);
    client.set_read_timeout(60);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res)
        throw DatasetError("download failed for '" + url + "': " +
                           httplib::to_string(res.error()));
    if (res->status != 200)
        throw DatasetError("download failed for '" + url +
                           "': HTTP " + std::to_string(res->status));
    return res->body;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// whitespace-delimited numeric table; non-numeric leading lines (dataset
// descriptions) are skipped, trailing non-numeric fields are kept as labels
struct NumericTable {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels; // last field when non-numeric, else ""
};

NumericTable parse_table(const std::string& text) {
    NumericTable table;
    std::istringstream stream(text);
    std::string line;
    std::size_t width = 0;
    while (std::getline(stream, line)) {
        std::istringstream fields(line);
        std::vector<double> row;
        std::string label;
        std::string token;
        bool bad = false;
        while (fields >> token) {
            try {
                std::size_t consumed = 0;
                const double value = std::stod(token, &consumed);
                if (consumed != token.size()) throw std::invalid_argument(token);
                row.push_back(value);
            } catch (const std::exception&) {
                // a non-numeric final token is a class label; anything else
                // marks a header/comment line
                std::string rest;
                if (fields >> rest) {
                    bad = true;
                } else {
                    label = token;
                }
                break;
            }
        }
        if (bad || row.empty()) continue;
        if (width == 0) width = row.size();
        if (row.size() != width) continue; // ragged line, not data
        table.rows.push_back(std::move(row));
        table.labels.push_back(label);
    }
    return table;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

bool dataset_available(const std::string& name) {
    const RemoteDataset& spec = find_dataset(name);
    return fs::exists(data_cache_dir() / spec.filename);
}

fs::path fetch_dataset(const std::string& name) {
    const RemoteDataset& spec = find_dataset(name);
    const fs::path dir = data_cache_dir();
    fs::create_directories(dir);
    const fs::path payload_path = dir / spec.filename;
    const fs::path digest_path = dir / (spec.filename + ".sha256");

    if (fs::exists(payload_path)) {
        if (fs::exists(digest_path)) {
            const std::string recorded = read_file(digest_path);
            const std::string stripped = recorded.substr(0, recorded.find_first_of(" \n\r\t"));
            const std::string actual = sha256_hex(read_file(payload_path));
            if (stripped != actual)
                throw DatasetError("checksum mismatch for cached '" + spec.name +
                                   "': expected " + stripped + ", found " + actual);
        }
        return payload_path;
    }

    std::string payload;
    for (const auto& url : spec.urls) payload += http_get(url);
    const std::string digest = sha256_hex(payload);
    if (fs::exists(digest_path)) {
        const std::string recorded = read_file(digest_path);
        const std::string stripped = recorded.substr(0, recorded.find_first_of(" \n\r\t"));
        if (stripped != digest)
            throw DatasetError("checksum mismatch for downloaded '" + spec.name +
                               "': expected " + stripped + ", found " + digest);
    } else {
        std::ofstream(digest_path) << digest << "\n";
        std::cout << "pinned sha256 for " << spec.name << ": " << digest << "\n";
    }
    std::ofstream(payload_path, std::ios::binary) << payload;
    return payload_path;
}

Eigen::MatrixXd load_no2() {
    if (!dataset_available("no2"))
        throw DatasetError("dataset 'no2' not cached; run fetch-data first");
    const NumericTable table = parse_table(read_file(data_cache_dir() / "no2.dat"));
    if (table.rows.empty())
        throw DatasetError("no2 payload contains no numeric rows");
    const std::size_t p = table.rows.front().size();
    Eigen::MatrixXd X(table.rows.size(), p);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = 0; j < p; ++j) X(i, j) = table.rows[i][j];
    return X;
}

Eigen::MatrixXd load_bus() {
    if (!dataset_available("bus"))
        throw DatasetError("dataset 'bus' not cached; run fetch-data first");
    const NumericTable table = parse_table(read_file(data_cache_dir() / "vehicle.dat"));
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        std::string label = table.labels[i];
        std::transform(label.begin(), label.end(), label.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (label == "bus") keep.push_back(i);
    }
    if (keep.empty())
        throw DatasetError("bus payload contains no rows labelled 'bus'");
    const std::size_t p = table.rows.front().size();
    Eigen::MatrixXd X(keep.size(), p);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < p; ++j) X(i, j) = table.rows[keep[i]][j];
    return X;
}

} // namespace rpca
