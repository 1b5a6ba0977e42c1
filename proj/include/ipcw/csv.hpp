#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ipcw/bands.hpp"
#include "ipcw/dataset.hpp"
#include "ipcw/simulation.hpp"
#include "ipcw/step_function.hpp"

namespace ipcw {

//! Shortest round-trip decimal representation; all CSV output goes through
//! this so identical runs produce byte-identical files.
std::string format_double(double v);

//! Dataset CSV with header z,delta,x1[,x2,...]; delta must be 0/1.
//! Parse errors name the offending line. Readers skip '#' comment lines,
//! which writers use to embed provenance (config, seed, version).
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const std::string& comment = "");

//! (u, G(u)) jump table; read back as a right-continuous step function
//! with G = 0 left of the first jump.
void write_km_csv(const std::filesystem::path& path, const StepFunction& sf,
                  const std::string& comment = "");
StepFunction read_step_csv(const std::filesystem::path& path);

//! Point-estimate rows x1..xd,h,estimate,flag (missing estimates emitted
//! as empty fields).
struct EstimateRow {
  std::vector<double> x;
  double h = 0.0;
  std::optional<double> estimate;
  std::string flag = "ok";
};
void write_estimates_csv(const std::filesystem::path& path,
                         const std::vector<EstimateRow>& rows, int dim,
                         const std::string& comment = "");

//! Band rows x1..xd,h,estimate,lower,upper,flag.
void write_band_csv(const std::filesystem::path& path,
                    const EstimateCurve& curve, int dim,
                    const std::string& comment = "");

//! Per-replication study records.
void write_records_csv(const std::filesystem::path& path,
                       const SimReport& report,
                       const std::string& comment = "");

//! Truth table (x, value) used for plot overlays.
std::vector<std::pair<double, double>> read_xy_csv(
    const std::filesystem::path& path);

}  // namespace ipcw
