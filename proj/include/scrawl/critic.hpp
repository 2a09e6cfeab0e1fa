#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "scrawl/error.hpp"
#include "scrawl/rng.hpp"
#include "scrawl/textutil.hpp"
#include "scrawl/tokenizer.hpp"

namespace scrawl {

enum class Label { Good, Bad };

inline const char* to_string(Label l) { return l == Label::Good ? "GOOD" : "BAD"; }

inline Label parse_label(std::string_view s) {
    const std::string v = to_lower(trim(s));
    if (v == "good") return Label::Good;
    if (v == "bad") return Label::Bad;
    throw Error(ErrorCode::ParseError, "label must be GOOD or BAD, got: " + std::string(s));
}

struct LabeledChunk {
    std::string text;
    Label label = Label::Bad;
    std::string annotator;
    int64_t ts = 0; // UTC seconds
};

// Sparse hashed feature counts. Ordered map so iteration (and thus training
// and serialization) is deterministic.
struct FeatureVector {
    std::map<uint32_t, double> counts;
    int hash_bits = 18;
};

// FNV-1a, 64-bit. Fixed constants; used for feature hashing so vectors are
// identical across platforms and runs.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr int kMinHashBits = 12;
constexpr int kMaxHashBits = 24;
constexpr int kCharNgramMin = 3;
constexpr int kCharNgramMax = 5;

// Features of a text: byte 3..5-grams of the lowercased text (prefix "c:")
// plus word-token unigrams (prefix "w:"), hashed into 2^hash_bits buckets.
inline FeatureVector featurize(std::string_view text, int hash_bits = 18) {
    if (hash_bits < kMinHashBits || hash_bits > kMaxHashBits) {
        throw Error(ErrorCode::ParseError, "hash_bits must be in [12,24]");
    }
    FeatureVector fv;
    fv.hash_bits = hash_bits;
    const uint64_t mask = (uint64_t{1} << hash_bits) - 1;
    const std::string lower = to_lower(text);

    std::string feat;
    for (int n = kCharNgramMin; n <= kCharNgramMax; ++n) {
        if (lower.size() < static_cast<size_t>(n)) break;
        for (size_t i = 0; i + n <= lower.size(); ++i) {
            feat.assign("c:");
            feat.append(lower, i, n);
            fv.counts[static_cast<uint32_t>(fnv1a64(feat) & mask)] += 1.0;
        }
    }
    for (const Token& t : tokenize(lower)) {
        if (t.kind != TokenKind::Word) continue;
        feat.assign("w:");
        feat.append(t.normalized);
        fv.counts[static_cast<uint32_t>(fnv1a64(feat) & mask)] += 1.0;
    }
    return fv;
}

struct TrainingMeta {
    int epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    uint64_t seed = 0;
    double train_accuracy = 0.0;
};

struct CriticModel {
    int hash_bits = 18;
    std::vector<double> weights; // dense, length 2^hash_bits
    double bias = 0.0;
    std::pair<int, int> char_ngram_range{kCharNgramMin, kCharNgramMax};
    TrainingMeta meta;
};

struct CriticScore {
    double probability = 0.5;
};

struct TrainOptions {
    int epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    int hash_bits = 18;
    uint64_t seed = 0;
    int batch_size = 32;
};

inline double sigmoid(double z) {
    if (z >= 0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Probability clamped into the open interval (0,1): sigmoid saturates to
// exactly 1.0 in double for z > ~37.
inline double clamp_probability(double p) {
    const double lo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::min(std::max(p, lo), hi);
}

inline double dot(const std::vector<double>& w, const FeatureVector& x) {
    double s = 0.0;
    for (const auto& [idx, count] : x.counts) s += w[idx] * count;
    return s;
}

// Mean L2-regularized log-loss over a dataset; the training objective.
// The bias is not regularized.
inline double logloss_objective(const std::vector<double>& weights, double bias,
                                const std::vector<std::pair<FeatureVector, int>>& data,
                                double l2) {
    double loss = 0.0;
    for (const auto& [x, y] : data) {
        const double p = clamp_probability(sigmoid(dot(weights, x) + bias));
        loss += y ? -std::log(p) : -std::log(1.0 - p);
    }
    loss /= static_cast<double>(data.size());
    double reg = 0.0;
    for (const double w : weights) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

// Analytic gradient of logloss_objective.
inline void logloss_gradient(const std::vector<double>& weights, double bias,
                             const std::vector<std::pair<FeatureVector, int>>& data, double l2,
                             std::vector<double>& grad_w, double& grad_b) {
    grad_w.assign(weights.size(), 0.0);
    grad_b = 0.0;
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (const auto& [x, y] : data) {
        const double p = sigmoid(dot(weights, x) + bias);
        const double err = (p - static_cast<double>(y)) * inv_n;
        for (const auto& [idx, count] : x.counts) grad_w[idx] += err * count;
        grad_b += err;
    }
    for (size_t i = 0; i < weights.size(); ++i) grad_w[i] += l2 * weights[i];
}

// Shuffled mini-batch gradient descent on the log-loss. Deterministic for a
// fixed seed: the shuffle uses the pinned RNG and batches run in order.
inline CriticModel train(const std::vector<LabeledChunk>& data, const TrainOptions& opt = {}) {
    if (opt.epochs < 1) throw Error(ErrorCode::ParseError, "epochs must be >= 1");
    bool has_good = false, has_bad = false;
    for (const LabeledChunk& d : data) {
        (d.label == Label::Good ? has_good : has_bad) = true;
    }
    if (!has_good || !has_bad) {
        throw Error(ErrorCode::SingleClassData, "training data must contain both GOOD and BAD");
    }

    std::vector<std::pair<FeatureVector, int>> examples;
    examples.reserve(data.size());
    for (const LabeledChunk& d : data) {
        examples.emplace_back(featurize(d.text, opt.hash_bits), d.label == Label::Good ? 1 : 0);
    }

    CriticModel model;
    model.hash_bits = opt.hash_bits;
    model.weights.assign(size_t{1} << opt.hash_bits, 0.0);
    model.bias = 0.0;
    model.meta = {opt.epochs, opt.learning_rate, opt.l2, opt.seed, 0.0};

    Rng rng(mix_seed(opt.seed, 0x637269746963ULL));
    std::vector<size_t> order(examples.size());
    std::iota(order.begin(), order.end(), size_t{0});

    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        // Fisher-Yates with the pinned RNG
        for (size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        for (size_t start = 0; start < order.size(); start += opt.batch_size) {
            const size_t end = std::min(order.size(), start + opt.batch_size);
            const double inv_b = 1.0 / static_cast<double>(end - start);

            // weight decay for the L2 term, applied to the dense vector
            const double decay = 1.0 - opt.learning_rate * opt.l2;
            for (double& w : model.weights) w *= decay;

            double grad_b = 0.0;
            for (size_t k = start; k < end; ++k) {
                const auto& [x, y] = examples[order[k]];
                const double p = sigmoid(dot(model.weights, x) + model.bias);
                const double err = (p - static_cast<double>(y)) * inv_b;
                for (const auto& [idx, count] : x.counts) {
                    model.weights[idx] -= opt.learning_rate * err * count;
                }
                grad_b += err;
            }
            model.bias -= opt.learning_rate * grad_b;
        }
    }

    size_t correct = 0;
    for (const auto& [x, y] : examples) {
        const double p = clamp_probability(sigmoid(dot(model.weights, x) + model.bias));
        if ((p >= 0.5 ? 1 : 0) == y) ++correct;
    }
    model.meta.train_accuracy = static_cast<double>(correct) / static_cast<double>(examples.size());
    return model;
}

inline CriticScore score(const CriticModel& model, std::string_view text) {
    const FeatureVector x = featurize(text, model.hash_bits);
    return {clamp_probability(sigmoid(dot(model.weights, x) + model.bias))};
}

// --- model file (versioned JSON, non-zero weights only) ---

inline void save_model(const CriticModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format"] = "scrawl-critic";
    j["version"] = 1;
    j["hash_bits"] = model.hash_bits;
    j["bias"] = model.bias;
    j["char_ngram_range"] = {model.char_ngram_range.first, model.char_ngram_range.second};
    nlohmann::ordered_json weights = nlohmann::ordered_json::object();
    for (size_t i = 0; i < model.weights.size(); ++i) {
        if (model.weights[i] != 0.0) weights[std::to_string(i)] = model.weights[i];
    }
    j["weights"] = std::move(weights);
    j["meta"] = {{"epochs", model.meta.epochs},
                 {"learning_rate", model.meta.learning_rate},
                 {"l2", model.meta.l2},
                 {"seed", model.meta.seed},
                 {"train_accuracy", model.meta.train_accuracy}};
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::WriteFailure, "cannot write model to " + path.string());
    f << j.dump(2) << "\n";
    if (!f) throw Error(ErrorCode::WriteFailure, "short write to " + path.string());
}

inline CriticModel load_model(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open model " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, "bad model file: " + std::string(e.what()));
    }
    if (j.value("format", "") != "scrawl-critic" || j.value("version", 0) != 1) {
        throw Error(ErrorCode::ParseError, "unrecognized model container: " + path.string());
    }
    CriticModel model;
    model.hash_bits = j.at("hash_bits").get<int>();
    if (model.hash_bits < kMinHashBits || model.hash_bits > kMaxHashBits) {
        throw Error(ErrorCode::ParseError, "model hash_bits out of range");
    }
    model.bias = j.at("bias").get<double>();
    model.weights.assign(size_t{1} << model.hash_bits, 0.0);
    for (const auto& [key, value] : j.at("weights").items()) {
        const size_t idx = std::stoull(key);
        if (idx >= model.weights.size()) {
            throw Error(ErrorCode::ParseError, "weight index out of range in model file");
        }
        model.weights[idx] = value.get<double>();
    }
    if (j.contains("meta")) {
        const auto& m = j["meta"];
        model.meta.epochs = m.value("epochs", 0);
        model.meta.learning_rate = m.value("learning_rate", 0.0);
        model.meta.l2 = m.value("l2", 0.0);
        model.meta.seed = m.value("seed", uint64_t{0});
        model.meta.train_accuracy = m.value("train_accuracy", 0.0);
    }
    return model;
}

// --- labels file (append-only JSONL) ---

inline std::vector<LabeledChunk> load_labels(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::FileMissing, "cannot open labels file " + path.string());
    std::vector<LabeledChunk> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim_view(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        LabeledChunk lc;
        lc.text = j.at("text").get<std::string>();
        lc.label = parse_label(j.at("label").get<std::string>());
        lc.annotator = j.value("annotator", "");
        lc.ts = j.value("ts", int64_t{0});
        out.push_back(std::move(lc));
    }
    return out;
}

inline std::string label_record_line(const LabeledChunk& lc) {
    nlohmann::ordered_json j;
    j["text"] = lc.text;
    j["label"] = to_string(lc.label);
    j["annotator"] = lc.annotator;
    j["ts"] = lc.ts;
    return j.dump();
}

} // namespace scrawl
