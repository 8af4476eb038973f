#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hofnet/adam.hpp"
#include "hofnet/encoder.hpp"
#include "hofnet/sampler.hpp"
#include "hofnet/shapes.hpp"

namespace hofnet {

enum class RegKind { Distance, Projection };

RegKind reg_kind_from_string(const std::string& s);
std::string to_string(RegKind k);

// Training hyperparameters. Every field round-trips through the key=value
// config format and the checkpoint, so a run is reproducible from either.
struct TrainConfig {
    std::vector<int> decoder_layers{3, 1024, 3};
    Activation activation = Activation::Relu;
    int k = 1;
    double lr = 1e-5;
    int steps = 2000;
    int train_samples = 1000; // canonical points drawn fresh each step
    int gt_points = 1000;
    std::uint64_t seed = 0;
    double lambda_reg = 0.0;  // 0 disables the regularizer
    RegKind reg = RegKind::Distance;
    SamplerKind sampler = SamplerKind::Ball3Interior;
    std::vector<int> encoder_hidden{256, 64};
    int raster_side = 32;
    int dataset_count = 5;
};

void validate(const TrainConfig& cfg);
MlpSpec decoder_spec(const TrainConfig& cfg);

// Flat key=value text, one pair per line, keys exactly as the field names
// above; '#' comments allowed; unknown keys are errors; absent keys keep
// their defaults.
TrainConfig parse_config_text(const std::string& text);
std::string config_text(const TrainConfig& cfg);

struct StepMetrics {
    double loss = 0.0;
    double chamfer_fwd = 0.0;
    double chamfer_bwd = 0.0;
};

// Loss evaluation detail for one (observation, gt) pair at a fixed canonical
// sample. Assignments and the relu pattern identify the smooth piece the
// loss sits on, which the finite-difference tests use to skip kinks/ties.
struct EvalDetail {
    StepMetrics metrics;
    std::vector<int> nn_fwd;            // per reconstruction point: gt id
    std::vector<int> nn_bwd;            // per gt point: reconstruction id
    std::vector<std::uint8_t> relu_pattern;
};

PointCloud canonical_sample(const TrainConfig& cfg, std::uint64_t step_index,
                            std::size_t count);

EvalDetail eval_step(const EncoderNet& enc, const Sample& sample, const TrainConfig& cfg,
                     const PointCloud& canonical);

// One optimizer step on phi: encode theta, map a fresh canonical sample,
// nearest-neighbor loss both ways (+ optional regularizer), Adam on phi only.
StepMetrics train_step(EncoderNet& enc, AdamState& adam, const Sample& sample,
                       const TrainConfig& cfg, std::uint64_t step_index);

struct TrainResult {
    EncoderNet enc;
    AdamState adam;
    std::vector<StepMetrics> history;
};

// Full loop over the dataset (batch size 1, samples visited round-robin).
// When `metrics_csv` is set, writes header step,loss,chamfer_fwd,chamfer_bwd
// and one row per step.
TrainResult train(const TrainConfig& cfg, const std::vector<Sample>& data,
                  std::ostream* metrics_csv = nullptr);

// n_points outputs of the k-fold mapping on fresh canonical samples;
// independent of the training sample count.
PointCloud reconstruct(const EncoderNet& enc, const Array& raster, std::size_t n_points,
                       int k, SamplerKind sampler, std::uint64_t seed);

struct Checkpoint {
    EncoderNet enc;
    TrainConfig cfg;
};

// Checkpoint file: the "HOF1" parameter block holding the encoder weights,
// followed by the config section. Bit-exact round trip; truncated or
// corrupted files fail without partial state.
void save_checkpoint(const std::string& path, const EncoderNet& enc,
                     const TrainConfig& cfg);
Checkpoint load_checkpoint(const std::string& path);

} // namespace hofnet
