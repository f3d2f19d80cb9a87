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

#include "lra/corpus.hpp"

#include <Eigen/QR>
#include <fstream>
#include <sstream>

#include "lra/geometry.hpp"
#include "lra/hashing.hpp"
#include "lra/rng.hpp"

namespace lra {
namespace {

std::string ribbon_param_string(const RibbonParams& p) {
  std::ostringstream out;
  out << "len=" << format_double17(p.length_lo) << ',' << format_double17(p.length_hi)
      << ";aspect=" << format_double17(p.aspect_lo) << ',' << format_double17(p.aspect_hi)
      << ";bend=" << format_double17(p.bend_scale)
      << ";taper=" << format_double17(p.taper_max)
      << ";rot=" << format_double17(p.rotation_max)
      << ";place=" << format_double17(p.place_lo) << ',' << format_double17(p.place_hi);
  return out.str();
}

}  // namespace

std::string corpus_fingerprint(const CorpusSpec& spec) {
  if (spec.is_file()) {
    std::ifstream in(spec.jsonl_path, std::ios::binary);
    if (!in) throw DataError("cannot open annotation file: " + spec.jsonl_path);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    std::uint64_t state = fnv1a64(bytes.str());
    state = fnv1a64(";n=" + std::to_string(spec.n_vertices), state);
    return to_hex(state);
  }
  std::ostringstream canonical;
  canonical << spec.family << ";count=" << spec.count << ";seed=" << spec.seed
            << ";n=" << spec.n_vertices;
  if (spec.family == "ribbon") {
    canonical << ';' << ribbon_param_string(spec.ribbon);
  } else if (spec.family == "rank") {
    canonical << ";rank=" << spec.rank
              << ";scale=" << format_double17(spec.rank_coeff_scale);
  } else {
    throw ConfigError("unknown corpus family '" + spec.family + "'");
  }
  return to_hex(fnv1a64(canonical.str()));
}

Eigen::MatrixXd rank_family_basis(const CorpusSpec& spec) {
  if (spec.rank < 1 || spec.rank > 2 * spec.n_vertices) {
    throw ConfigError("planted rank must lie in [1, 2 * n_vertices]");
  }
  Rng rng = Rng(spec.seed).split("rank-basis");
  Eigen::MatrixXd gaussian(2 * spec.n_vertices, spec.rank);
  for (Eigen::Index c = 0; c < gaussian.cols(); ++c) {
    for (Eigen::Index r = 0; r < gaussian.rows(); ++r) {
      gaussian(r, c) = rng.normal();
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  return qr.householderQ() *
         Eigen::MatrixXd::Identity(2 * spec.n_vertices, spec.rank);
}

Corpus load_corpus(const CorpusSpec& spec) {
  Corpus corpus;
  corpus.fingerprint = corpus_fingerprint(spec);

  if (spec.is_file()) {
    if (spec.n_vertices < 4) throw ConfigError("n_vertices must be >= 4");
    IngestResult ingest = read_annotations_jsonl(spec.jsonl_path);
    corpus.diagnostics = std::move(ingest.diagnostics);
    for (const AnnotationRecord& record : ingest.records) {
      for (std::size_t i = 0; i < record.polygons.size(); ++i) {
        const std::string id = record.id + "#" + std::to_string(i);
        try {
          corpus.contours.push_back(
              resample_contour(record.polygons[i], spec.n_vertices));
          corpus.ids.push_back(id);
        } catch (const DataError& err) {
          corpus.diagnostics.push_back(
              {record.line, "polygon '" + id + "': " + err.what()});
        }
      }
    }
    if (corpus.contours.empty()) {
      throw DataError("annotation file yielded no usable polygons: " +
                      spec.jsonl_path);
    }
    return corpus;
  }

  if (spec.count < 1) throw ConfigError("corpus count must be >= 1");
  if (spec.family == "ribbon") {
    corpus.contours =
        generate_ribbon_corpus(spec.count, spec.n_vertices, spec.ribbon, spec.seed);
    for (int i = 0; i < spec.count; ++i) {
      corpus.ids.push_back("ribbon-" + std::to_string(i));
    }
    return corpus;
  }
  if (spec.family == "rank") {
    const Eigen::MatrixXd basis = rank_family_basis(spec);
    Rng rng = Rng(spec.seed).split("rank-coeffs");
    for (int i = 0; i < spec.count; ++i) {
      Eigen::VectorXd coeffs(spec.rank);
      for (int k = 0; k < spec.rank; ++k) {
        coeffs[k] = rng.normal() * spec.rank_coeff_scale / (k + 1);
      }
      corpus.contours.push_back(unflatten(basis * coeffs));
      corpus.ids.push_back("rank-" + std::to_string(i));
    }
    return corpus;
  }
  throw ConfigError("unknown corpus family '" + spec.family + "'");
}

}  // namespace lra
