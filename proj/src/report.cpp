// Copyright 2026 The lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lra/hashing.hpp"
#include "lra/robustness.hpp"

namespace lra {

using nlohmann::json;

namespace {

std::string fixed3(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return std::string(buf);
}

// IoU-like quantities print with three decimals; open-ended measurements
// keep full round-trip precision. NaN marks "not applicable" and prints as
// an empty field.
void append_field(std::string& line, double value, bool three_decimals) {
  line += ',';
  if (std::isnan(value)) return;
  line += three_decimals ? fixed3(value) : format_double17(value);
}

void add_number(json& object, const char* key, double value) {
  if (!std::isnan(value)) object[key] = value;
}

}  // namespace

std::string Report::to_csv(bool include_runtime) const {
  std::string out =
      "op,condition,method,dim,noise,mean_iou,iou_q25,iou_q50,iou_q75,"
      "mean_sq_err,objective,subspace_dist,explained_var";
  if (include_runtime) out += ",runtime_s";
  out += ",corpus_hash,seed,config_hash\n";
  for (const ReportRow& row : rows) {
    std::string line = row.op + ',' + row.condition + ',' + row.method + ',' +
                       std::to_string(row.dim);
    append_field(line, row.noise, true);
    append_field(line, row.mean_iou, true);
    append_field(line, row.iou_q25, true);
    append_field(line, row.iou_q50, true);
    append_field(line, row.iou_q75, true);
    append_field(line, row.mean_sq_err, false);
    append_field(line, row.objective, false);
    append_field(line, row.subspace_dist, false);
    append_field(line, row.explained_var, false);
    if (include_runtime) append_field(line, row.runtime_s, true);
    line += ',' + corpus_hash + ',' + std::to_string(seed) + ',' + config_hash;
    out += line + '\n';
  }
  return out;
}

std::string Report::to_json(bool include_runtime) const {
  json doc;
  doc["rows"] = json::array();
  for (const ReportRow& row : rows) {
    json item;
    item["op"] = row.op;
    item["condition"] = row.condition;
    item["method"] = row.method;
    item["dim"] = row.dim;
    add_number(item, "noise", row.noise);
    add_number(item, "mean_iou", row.mean_iou);
    add_number(item, "iou_q25", row.iou_q25);
    add_number(item, "iou_q50", row.iou_q50);
    add_number(item, "iou_q75", row.iou_q75);
    add_number(item, "mean_sq_err", row.mean_sq_err);
    add_number(item, "objective", row.objective);
    add_number(item, "subspace_dist", row.subspace_dist);
    add_number(item, "explained_var", row.explained_var);
    if (include_runtime) add_number(item, "runtime_s", row.runtime_s);
    doc["rows"].push_back(std::move(item));
  }
  doc["corpus_hash"] = corpus_hash;
  if (!corpus_hash_b.empty()) doc["corpus_hash_b"] = corpus_hash_b;
  doc["seed"] = seed;
  doc["config_hash"] = config_hash;
  if (!meta.empty()) doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

namespace {

void write_text(const std::string& path, const std::string& text,
                const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(std::string("cannot open ") + what + " for writing: " + path);
  out << text;
  if (!out.good()) throw DataError(std::string("failed while writing ") + what + ": " + path);
}

}  // namespace

void Report::write_csv(const std::string& path, bool include_runtime) const {
  write_text(path, to_csv(include_runtime), "report CSV");
}

void Report::write_json(const std::string& path, bool include_runtime) const {
  write_text(path, to_json(include_runtime), "report JSON");
}

void write_per_contour_csv(const std::vector<std::string>& ids,
                           const std::vector<double>& ious,
                           const std::string& path) {
  if (ids.size() != ious.size()) {
    throw DataError("write_per_contour_csv: id and IoU counts differ");
  }
  std::string text = "id,iou\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", ious[i]);
    text += ids[i] + ',' + buf + '\n';
  }
  write_text(path, text, "per-contour CSV");
}

}  // namespace lra
