#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "scrawl/critic.hpp"

#include "support/matchers.hpp"
#include "support/test_util.hpp"

using namespace scrawl;
using testutil::HasErrorCode;

namespace {

// independent FNV-1a reimplementation used as the hashing oracle
uint64_t oracle_fnv(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

uint32_t oracle_bucket(const std::string& feature, int bits) {
    return static_cast<uint32_t>(oracle_fnv(feature) & ((uint64_t{1} << bits) - 1));
}

std::vector<LabeledChunk> toy_set() {
    std::vector<LabeledChunk> data;
    for (int i = 0; i < 20; ++i) data.push_back({"good good good", Label::Good, "t", 0});
    for (int i = 0; i < 20; ++i) data.push_back({"bad bad bad", Label::Bad, "t", 0});
    return data;
}

} // namespace

TEST_CASE("fnv1a64 matches the published constants", "[critic]") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("featurize of empty text is empty", "[critic]") {
    CHECK(featurize("", 16).counts.empty());
}

TEST_CASE("featurize counts character n-grams and word unigrams", "[critic]") {
    // "aaaa": 3-grams {aaa x2}, 4-grams {aaaa x1}, word unigram {aaaa x1}
    const FeatureVector fv = featurize("aaaa", 16);
    std::map<uint32_t, double> expect;
    expect[oracle_bucket("c:aaa", 16)] += 2.0;
    expect[oracle_bucket("c:aaaa", 16)] += 1.0;
    expect[oracle_bucket("w:aaaa", 16)] += 1.0;
    CHECK(fv.counts == expect);
    CHECK(fv.counts.size() == 3); // no collisions among these three at 16 bits
}

TEST_CASE("featurize lowercases and is case-insensitive", "[critic]") {
    CHECK(featurize("The Night", 14).counts == featurize("the night", 14).counts);
}

TEST_CASE("featurize is stable across calls (golden fixture)", "[critic]") {
    const std::string text = "the night hums.";
    const FeatureVector fv = featurize(text, 12);
    // recompute with the oracle hash over hand-enumerated features
    std::map<uint32_t, double> expect;
    const std::string lower = text;
    for (int n = 3; n <= 5; ++n) {
        for (size_t i = 0; i + n <= lower.size(); ++i) {
            expect[oracle_bucket("c:" + lower.substr(i, n), 12)] += 1.0;
        }
    }
    for (const std::string w : {"the", "night", "hums"}) {
        expect[oracle_bucket("w:" + w, 12)] += 1.0;
    }
    CHECK(fv.counts == expect);
}

TEST_CASE("featurize validates hash_bits", "[critic]") {
    CHECK_THROWS_MATCHES(featurize("x", 11), Error, HasErrorCode(ErrorCode::ParseError));
    CHECK_THROWS_MATCHES(featurize("x", 25), Error, HasErrorCode(ErrorCode::ParseError));
}

TEST_CASE("analytic gradient matches central differences", "[critic]") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> idx_dist(0, 9);
    std::uniform_int_distribution<int> count_dist(1, 3);
    std::uniform_int_distribution<int> label_dist(0, 1);
    const double l2_choices[] = {0.0, 1e-4, 0.1};

    for (int inst = 0; inst < 20; ++inst) {
        const int dim = 10;
        std::vector<double> w(dim);
        for (double& x : w) x = gauss(rng);
        double bias = gauss(rng);
        const double l2 = l2_choices[inst % 3];

        std::vector<std::pair<FeatureVector, int>> data;
        for (int e = 0; e < 5; ++e) {
            FeatureVector fv;
            for (int k = 0; k < 4; ++k) {
                fv.counts[static_cast<uint32_t>(idx_dist(rng))] += count_dist(rng);
            }
            data.emplace_back(std::move(fv), label_dist(rng));
        }

        std::vector<double> grad_w;
        double grad_b = 0.0;
        logloss_gradient(w, bias, data, l2, grad_w, grad_b);
        REQUIRE(grad_w.size() == w.size());

        auto rel_close = [](double a, double n) {
            const double denom = std::max(1e-8, std::abs(a) + std::abs(n));
            return std::abs(a - n) / denom <= 1e-4;
        };

        for (int i = 0; i < dim; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(w[i]));
            std::vector<double> wp = w, wm = w;
            wp[i] += h;
            wm[i] -= h;
            const double numeric =
                (logloss_objective(wp, bias, data, l2) - logloss_objective(wm, bias, data, l2)) /
                (2 * h);
            INFO("instance " << inst << " coordinate " << i);
            CHECK(rel_close(grad_w[i], numeric));
        }
        const double h = 1e-6 * std::max(1.0, std::abs(bias));
        const double numeric =
            (logloss_objective(w, bias + h, data, l2) - logloss_objective(w, bias - h, data, l2)) /
            (2 * h);
        INFO("instance " << inst << " bias");
        CHECK(rel_close(grad_b, numeric));
    }
}

TEST_CASE("training separates the toy set", "[critic]") {
    const auto data = toy_set();
    const CriticModel model = train(data);
    CHECK(model.meta.train_accuracy >= 0.95);

    // independent oracle: nearest centroid over the same feature vectors
    const FeatureVector good_x = featurize("good good good", model.hash_bits);
    const FeatureVector bad_x = featurize("bad bad bad", model.hash_bits);
    auto dist2 = [](const FeatureVector& a, const FeatureVector& b) {
        std::map<uint32_t, double> diff;
        for (const auto& [i, c] : a.counts) diff[i] += c;
        for (const auto& [i, c] : b.counts) diff[i] -= c;
        double s = 0.0;
        for (const auto& [i, d] : diff) s += d * d;
        return s;
    };
    for (const LabeledChunk& d : data) {
        const FeatureVector x = featurize(d.text, model.hash_bits);
        const bool oracle_good = dist2(x, good_x) < dist2(x, bad_x);
        CHECK(oracle_good == (d.label == Label::Good)); // the set is separable
        const bool model_good = score(model, d.text).probability >= 0.5;
        CHECK(model_good == oracle_good); // boundary sign agrees on all 40
    }

    CHECK(score(model, "good good good").probability > 0.9);
    CHECK(score(model, "bad bad bad").probability < 0.1);
}

TEST_CASE("training is deterministic in its seed", "[critic]") {
    const auto data = toy_set();
    TrainOptions opt;
    opt.seed = 99;
    const CriticModel a = train(data, opt);
    const CriticModel b = train(data, opt);
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);
    opt.seed = 100;
    const CriticModel c = train(data, opt);
    CHECK(c.weights != a.weights); // a different shuffle leaves different traces
}

TEST_CASE("training refuses single-class data", "[critic]") {
    std::vector<LabeledChunk> data;
    for (int i = 0; i < 5; ++i) data.push_back({"all the same", Label::Good, "t", 0});
    CHECK_THROWS_MATCHES(train(data), Error, HasErrorCode(ErrorCode::SingleClassData));
    CHECK_THROWS_MATCHES(train({}), Error, HasErrorCode(ErrorCode::SingleClassData));
}

TEST_CASE("a zero model scores one half", "[critic]") {
    CriticModel model;
    model.hash_bits = 12;
    model.weights.assign(size_t{1} << 12, 0.0);
    CHECK(score(model, "anything at all").probability == 0.5);
}

TEST_CASE("scores stay inside the open unit interval", "[critic]") {
    CHECK(clamp_probability(1.0) < 1.0);
    CHECK(clamp_probability(0.0) > 0.0);
    CHECK(clamp_probability(sigmoid(1000.0)) < 1.0);
    CHECK(clamp_probability(sigmoid(-1000.0)) > 0.0);
    CHECK(clamp_probability(0.5) == 0.5);
}

TEST_CASE("model files round trip", "[critic]") {
    testutil::TempDir tmp;
    const auto path = tmp.path() / "model.json";
    const CriticModel model = train(toy_set());
    save_model(model, path);
    const CriticModel back = load_model(path);
    CHECK(back.hash_bits == model.hash_bits);
    CHECK(back.weights == model.weights);
    CHECK(back.bias == model.bias);
    CHECK(back.meta.train_accuracy == model.meta.train_accuracy);
    CHECK(back.meta.seed == model.meta.seed);
    CHECK(score(back, "good good good").probability ==
          score(model, "good good good").probability);
}

TEST_CASE("model loading rejects broken containers", "[critic]") {
    testutil::TempDir tmp;
    CHECK_THROWS_MATCHES(load_model(tmp.path() / "absent.json"), Error,
                         HasErrorCode(ErrorCode::FileMissing));

    const auto garbage = tmp.path() / "garbage.json";
    testutil::write_file(garbage, "not json at all");
    CHECK_THROWS_MATCHES(load_model(garbage), Error, HasErrorCode(ErrorCode::ParseError));

    const auto wrong = tmp.path() / "wrong.json";
    testutil::write_file(wrong, R"({"format":"other","version":1})");
    CHECK_THROWS_MATCHES(load_model(wrong), Error, HasErrorCode(ErrorCode::ParseError));

    const auto range = tmp.path() / "range.json";
    testutil::write_file(range,
                         R"({"format":"scrawl-critic","version":1,"hash_bits":12,)"
                         R"("bias":0.0,"weights":{"99999":1.0}})");
    CHECK_THROWS_MATCHES(load_model(range), Error, HasErrorCode(ErrorCode::ParseError));

    const auto bits = tmp.path() / "bits.json";
    testutil::write_file(bits,
                         R"({"format":"scrawl-critic","version":1,"hash_bits":30,)"
                         R"("bias":0.0,"weights":{}})");
    CHECK_THROWS_MATCHES(load_model(bits), Error, HasErrorCode(ErrorCode::ParseError));
}

TEST_CASE("label records round trip through the JSONL format", "[critic]") {
    testutil::TempDir tmp;
    const auto path = tmp.path() / "labels.jsonl";
    const LabeledChunk a{"first text", Label::Good, "sam", 1700000000};
    const LabeledChunk b{"second text", Label::Bad, "kim", 1700000001};
    testutil::write_file(path, label_record_line(a) + "\n" + label_record_line(b) + "\n");

    const auto back = load_labels(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].text == "first text");
    CHECK(back[0].label == Label::Good);
    CHECK(back[0].annotator == "sam");
    CHECK(back[0].ts == 1700000000);
    CHECK(back[1].label == Label::Bad);
}

TEST_CASE("label loading reports the offending line", "[critic]") {
    testutil::TempDir tmp;
    const auto path = tmp.path() / "labels.jsonl";
    testutil::write_file(path, label_record_line({"fine", Label::Good, "", 0}) + "\nnot json\n");
    try {
        load_labels(path);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("label parsing accepts only the two label spellings", "[critic]") {
    CHECK(parse_label("GOOD") == Label::Good);
    CHECK(parse_label("BAD") == Label::Bad);
    CHECK_THROWS_MATCHES(parse_label("MAYBE"), Error, HasErrorCode(ErrorCode::ParseError));
}
