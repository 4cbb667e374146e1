#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace rpca {

namespace detail {
extern const double kIrisValues[150][4];
extern const char* kIrisSpecies[150];
} // namespace detail

// the embedded iris measurements (canonical published data file), 150 x 4
const Eigen::MatrixXd& iris_measurements();
const std::vector<std::string>& iris_species();

// the projection-experiment subsample: all 50 setosa plus the first
// `contaminants_per_class` versicolor and virginica in dataset order
Eigen::MatrixXd iris_projection_subset(int contaminants_per_class = 5);

// cache directory for fetched datasets: $RPCA_DATA_DIR or ./data
std::filesystem::path data_cache_dir();

struct RemoteDataset {
    std::string name;
    std::vector<std::string> urls; // downloaded and concatenated in order
    std::string filename;          // cached payload name
};

const std::vector<RemoteDataset>& remote_datasets();

// true when the dataset payload is present in the cache
bool dataset_available(const std::string& name);

// Download a dataset into the cache and record its SHA-256. A previously
// recorded digest is verified strictly; a first fetch stores the digest
// alongside the payload (printed so it can be pinned).
std::filesystem::path fetch_dataset(const std::string& name);

// hex SHA-256 of a byte buffer
std::string sha256_hex(const std::string& bytes);

// air-quality roadside measurements: 500 observations x 8 variables
Eigen::MatrixXd load_no2();

// bus silhouette shape features: 218 observations x 18 variables
Eigen::MatrixXd load_bus();

} // namespace rpca
