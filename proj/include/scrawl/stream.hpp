#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "scrawl/corpus.hpp"
#include "scrawl/error.hpp"
#include "scrawl/markov.hpp"
#include "scrawl/process.hpp"
#include "scrawl/rng.hpp"

namespace scrawl {

enum class StreamOrigin { Markov, File, External };

inline const char* to_string(StreamOrigin o) {
    switch (o) {
        case StreamOrigin::Markov: return "markov";
        case StreamOrigin::File: return "file";
        case StreamOrigin::External: return "external";
    }
    return "file";
}

struct Segment {
    std::string text;
    Condition condition;
    StreamOrigin origin = StreamOrigin::File;
};

// Pull-based segment source. next() returns nullopt when exhausted.
class TextStream {
public:
    virtual ~TextStream() = default;
    virtual std::optional<Segment> next() = 0;
};

// Draws a fixed number of segments from a trained model. Each segment's
// sampling seed is derived from (seed, index), so the whole stream is a pure
// function of its parameters.
class MarkovStream final : public TextStream {
public:
    MarkovStream(MarkovModel model, Condition condition, int segments, int max_tokens,
                 uint64_t seed)
        : model_(std::move(model)), condition_(condition), remaining_(segments),
          max_tokens_(max_tokens), seed_(seed) {
        if (!model_.has_condition(condition_)) {
            throw Error(ErrorCode::UnknownCondition,
                        "model has no seed contexts for " + to_string(condition_));
        }
    }

    std::optional<Segment> next() override {
        while (remaining_ > 0) {
            const uint64_t sub_seed = mix_seed(seed_, static_cast<uint64_t>(index_));
            ++index_;
            --remaining_;
            std::string text = sample(model_, condition_, max_tokens_, sub_seed);
            if (trim_view(text).empty()) continue; // dead-end draw, try the next seed
            return Segment{std::move(text), condition_, StreamOrigin::Markov};
        }
        return std::nullopt;
    }

private:
    MarkovModel model_;
    Condition condition_;
    int remaining_;
    int max_tokens_;
    uint64_t seed_;
    int index_ = 0;
};

// Replays a text file, one segment per non-blank line.
class FileStream final : public TextStream {
public:
    FileStream(const std::filesystem::path& path, Condition condition)
        : file_(path), condition_(condition) {
        if (!file_) throw Error(ErrorCode::SourceFailure, "cannot open " + path.string());
    }

    std::optional<Segment> next() override {
        std::string line;
        while (std::getline(file_, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim_view(line).empty()) continue;
            return Segment{line, condition_, StreamOrigin::File};
        }
        return std::nullopt;
    }

private:
    std::ifstream file_;
    Condition condition_;
};

// Reads newline-delimited segments from a child process's stdout. The child
// gets no stdin. After the last line, a nonzero or signaled exit raises
// ChildCrashed so the pipeline can report it and stop cleanly.
class ExternalStream final : public TextStream {
public:
    ExternalStream(const std::string& command_line, Condition condition)
        : child_(command_line), condition_(condition) {
        child_.close_stdin();
    }

    std::optional<Segment> next() override {
        if (done_) return std::nullopt;
        while (true) {
            std::optional<std::string> line = child_.read_line(-1);
            if (!line) {
                done_ = true;
                if (!child_.exited_cleanly()) {
                    throw Error(ErrorCode::ChildCrashed, child_.exit_description());
                }
                return std::nullopt;
            }
            if (trim_view(*line).empty()) continue;
            return Segment{std::move(*line), condition_, StreamOrigin::External};
        }
    }

private:
    ChildProcess child_;
    Condition condition_;
    bool done_ = false;
};

} // namespace scrawl
