#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "sfm/oracle.hpp"

namespace sfm::cli {

// On-disk description of a problem instance.  Small parameters live inline
// in `params`; bulky data (points, labels, images, unary vectors) lives in
// side files referenced by `data_paths`, resolved relative to the JSON file.
//
// Kinds: "modular" (params.weights), "iwata" (p only),
//        "two-moons" (points/labels CSVs + params.alpha/params.clamp),
//        "grid" (image PNM + unary CSV).
struct InstanceSpec {
  std::string name;
  std::string kind;
  int p = 0;
  nlohmann::json params = nlohmann::json::object();
  std::map<std::string, std::string> data_paths;
  uint64_t seed = 0;
  std::string base_dir; // directory of the JSON file, for path resolution
};

InstanceSpec load_instance(const std::string& json_path);
void save_instance(const InstanceSpec& spec, const std::string& json_path);

// Instantiates the oracle an instance describes (reads its data files).
std::shared_ptr<SubmodularOracle> build_oracle(const InstanceSpec& spec);

} // namespace sfm::cli
