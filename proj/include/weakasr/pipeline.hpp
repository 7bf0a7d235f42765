// weakasr/pipeline.hpp

// Copyright 2026 The weakasr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEAKASR_PIPELINE_HPP
#define WEAKASR_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weakasr/ctc.hpp"
#include "weakasr/encoder.hpp"
#include "weakasr/ngramlm.hpp"
#include "weakasr/synthdata.hpp"
#include "weakasr/unkfill.hpp"
#include "weakasr/vocab.hpp"
#include "weakasr/worddecode.hpp"

namespace weakasr {

struct TrainSettings {
  int hidden_dim = 32;
  int kernel_width = 7;
  int stride = 3;
  int ff_layers = 2;
  double learning_rate = 3e-3;
  int epochs = 20;
  int batch_size = 16;
};

struct PipelineConfig {
  std::uint64_t seed = 20260809;
  std::string data_dir = "data";
  std::string out_dir = "run";
  SynthConfig data;

  int vocab_top_k = 30;
  double alpha = 0.5;
  TrainSettings word;           // stage 1, stride 3
  int lm_order = 3;
  double lm_k = 0.1;
  FillStrategy fill_strategy = FillStrategy::kReplaceTranscriptVocab;
  int fill_beam = 8;
  TrainSettings ctc;            // stage 4, stride 1
  bool ctc_use_gold = false;    // ablation: train the letter model on refs

  std::string train_path() const { return data_dir + "/train.jsonl"; }
  std::string dev_path() const { return data_dir + "/dev.jsonl"; }
  std::string lm_corpus_path() const { return data_dir + "/lm_corpus.txt"; }
};

PipelineConfig default_config();
std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& config, const std::string& path);

struct RunReport {
  std::vector<double> word_epoch_loss;
  std::vector<double> word_epoch_dev_wer;
  double word_dev_wer = -1.0;  // best epoch
  int word_best_epoch = -1;

  double pl_raw_wer = -1.0;
  std::size_t pl_unk_tokens = 0;
  std::size_t pl_total_tokens = 0;

  std::map<std::string, double> pl_filled_wer;  // strategy -> train-set WER

  std::vector<double> ctc_epoch_loss;
  std::vector<double> ctc_epoch_dev_wer;
  double ctc_dev_wer = -1.0;  // best epoch
  int ctc_best_epoch = -1;
  std::size_t ctc_skipped = 0;

  std::map<std::string, double> stage_seconds;
  bool completed = false;
  std::string error;
};

std::string report_to_json(const RunReport& report);
void save_report(const RunReport& report, const std::string& path);

// Writes data_dir/{train.jsonl,dev.jsonl,lm_corpus.txt} if any is missing.
void ensure_dataset(const PipelineConfig& config);

// Weak training: aggregation loss against bag targets, Adam, dev greedy WER
// tracked per epoch; returns the best-dev-WER parameters.
EncoderParams stage1_train_word_model(const PipelineConfig& config,
                                      const std::vector<TrainSample>& train,
                                      const std::vector<SyntheticSample>& dev,
                                      const Vocabulary& vocab, RunReport& report);

std::vector<PseudoLabel> stage2_generate_pls(const EncoderParams& params,
                                             const std::vector<TrainSample>& train,
                                             const Vocabulary& vocab);

std::vector<FillResult> stage3_fill_unks(const std::vector<PseudoLabel>& pls,
                                         const NGramModel& lm,
                                         FillStrategy strategy,
                                         const std::vector<TrainSample>& train,
                                         int beam_width);

struct CtcTrainResult {
  EncoderParams params;
  LetterAlphabet alphabet;
};

// Letter CTC training on per-sample word labels (pseudo or gold). Samples
// whose input is too short to align their spelling are skipped and counted.
CtcTrainResult stage4_train_ctc(const PipelineConfig& config,
                                const std::vector<TrainSample>& train,
                                const std::vector<std::vector<std::string>>& labels,
                                const std::vector<SyntheticSample>& dev,
                                RunReport& report);

double evaluate_word_model(const EncoderParams& params, const Vocabulary& vocab,
                           const std::vector<SyntheticSample>& samples);
double evaluate_letter_model(const EncoderParams& params,
                             const LetterAlphabet& alphabet,
                             const std::vector<SyntheticSample>& samples);

// Stages 1-4 in order, persisting every artifact under out_dir. With resume,
// stages whose artifacts already exist are loaded instead of recomputed.
RunReport run_all(const PipelineConfig& config, bool resume = false);

struct AlphaSweepEntry {
  double alpha = 0.0;
  double final_dev_wer = 0.0;  // last epoch: converged-behavior comparison
  double best_dev_wer = 0.0;
};
std::vector<AlphaSweepEntry> sweep_alpha(const PipelineConfig& config,
                                         const std::vector<double>& alphas);

struct VocabSweepEntry {
  int size = 0;
  double weak_dev_wer = 0.0;
  double oracle_wer = 0.0;
  double oracle_wer_delete = 0.0;
};
std::vector<VocabSweepEntry> sweep_vocab(const PipelineConfig& config,
                                         const std::vector<int>& sizes);

// FNV-1a 64 content hash, hex-encoded; used for the artifact manifest.
std::string hash_file(const std::string& path);
void write_manifest(const std::string& out_dir,
                    const std::vector<std::string>& artifact_names);

}  // namespace weakasr

#endif  // WEAKASR_PIPELINE_HPP
