#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "scrawl/annotate.hpp"
#include "scrawl/config.hpp"
#include "scrawl/corpus.hpp"
#include "scrawl/critic.hpp"
#include "scrawl/handwriting.hpp"
#include "scrawl/pipeline.hpp"
#include "scrawl/stroke_font.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    const scrawl::PipelineConfig cfg = scrawl::load_pipeline_config(config_path);
    const scrawl::RunResult result = scrawl::run(cfg);
    std::printf("chunks    %zu\n", result.chunks);
    std::printf("accepted  %zu\n", result.accepted);
    for (const auto& [rule, n] : result.rejected_by_rule) {
        std::printf("  %-14s %zu\n", rule.c_str(), n);
    }
    std::printf("records   %s\n", result.records_path.string().c_str());
    return 0;
}

int cmd_annotate(const std::string& queue_path, const std::string& labels_path,
                 const std::string& annotator) {
    scrawl::AnnotateOptions opt;
    opt.annotator = annotator;
    const scrawl::AnnotateResult r =
        scrawl::annotate(queue_path, labels_path, std::cin, std::cout, opt);
    std::printf("labeled %zu, skipped %zu, remaining %zu\n", r.labeled, r.skipped, r.remaining);
    return 0;
}

int cmd_train(const std::string& labels_path, const std::string& out_path,
              const scrawl::TrainOptions& opt) {
    const std::vector<scrawl::LabeledChunk> labels = scrawl::load_labels(labels_path);
    if (labels.empty()) {
        throw scrawl::Error(scrawl::ErrorCode::SingleClassData, "labels file is empty");
    }
    const scrawl::CriticModel model = scrawl::train(labels, opt);
    scrawl::save_model(model, out_path);
    std::printf("trained on %zu examples, train accuracy %.4f\n", labels.size(),
                model.meta.train_accuracy);
    std::printf("model     %s\n", out_path.c_str());
    return 0;
}

int cmd_render(const std::string& text, double strength, const std::string& out_path,
               const std::string& font_path, uint64_t seed) {
    const scrawl::StrokeFont font = scrawl::StrokeFont::load(font_path);
    const std::string svg = scrawl::handwrite_svg(text, font, strength, seed);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    out << svg;
    if (!out) {
        throw scrawl::Error(scrawl::ErrorCode::OutputIOFailure, "cannot write " + out_path);
    }
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_corpus_prep(const std::string& manifest_path, const std::string& out_dir) {
    const std::vector<scrawl::CorpusEntry> entries = scrawl::load_corpus_manifest(manifest_path);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw scrawl::Error(scrawl::ErrorCode::OutputIOFailure,
                            "cannot create " + out_dir + ": " + ec.message());
    }
    const std::filesystem::path out = std::filesystem::path(out_dir) / "corpus.jsonl";
    scrawl::write_labeled_jsonl(entries, out);

    std::map<std::string, size_t> counts;
    for (const scrawl::CorpusEntry& e : entries) ++counts[to_string(e.condition())];
    std::printf("entries   %zu\n", entries.size());
    for (const auto& [cond, n] : counts) std::printf("  %-12s %zu\n", cond.c_str(), n);
    std::printf("corpus    %s\n", out.string().c_str());
    return 0;
}

int cmd_report(const std::string& records_path) {
    const scrawl::RunReport rep = scrawl::report(records_path);
    std::fputs(scrawl::format_report(rep).c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate, filter, score and hand-render short texts"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a pipeline run from a config file");
    run_cmd->add_option("--config", config_path, "pipeline config file")->required();

    std::string queue_path, labels_path, annotator = "anonymous";
    CLI::App* ann_cmd = app.add_subcommand("annotate", "label queued chunks GOOD/BAD");
    ann_cmd->add_option("--queue", queue_path, "jsonl queue of chunks to label")->required();
    ann_cmd->add_option("--labels", labels_path, "labels file to append to")->required();
    ann_cmd->add_option("--annotator", annotator, "name recorded with each label");

    std::string train_labels, model_out;
    scrawl::TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train-critic", "fit the GOOD/BAD scorer");
    train_cmd->add_option("--labels", train_labels, "labeled chunks, jsonl")->required();
    train_cmd->add_option("--out", model_out, "model file to write")->required();
    train_cmd->add_option("--epochs", train_opt.epochs, "training epochs");
    train_cmd->add_option("--learning-rate", train_opt.learning_rate, "SGD step size");
    train_cmd->add_option("--l2", train_opt.l2, "L2 penalty");
    train_cmd->add_option("--hash-bits", train_opt.hash_bits, "feature table size, log2");
    train_cmd->add_option("--seed", train_opt.seed, "shuffle seed");

    std::string render_text, render_out, render_font;
    double render_strength = 0.0;
    uint64_t render_seed = 0;
    CLI::App* render_cmd = app.add_subcommand("render", "write one text as a shaky-hand SVG");
    render_cmd->add_option("--text", render_text, "text to render")->required();
    render_cmd->add_option("--strength", render_strength, "shakiness in [0,1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    render_cmd->add_option("--out", render_out, "output svg path")->required();
    render_cmd->add_option("--font", render_font, "stroke font file")->required();
    render_cmd->add_option("--seed", render_seed, "jitter seed");

    std::string manifest_path, prep_out;
    CLI::App* prep_cmd = app.add_subcommand("corpus-prep", "label a corpus manifest into jsonl");
    prep_cmd->add_option("--manifest", manifest_path, "tab-separated path/source_tag manifest")
        ->required();
    prep_cmd->add_option("--out", prep_out, "output directory")->required();

    std::string records_path;
    CLI::App* report_cmd = app.add_subcommand("report", "summarize a run's records file");
    report_cmd->add_option("--records", records_path, "records.jsonl from a run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*run_cmd) return cmd_run(config_path);
        if (*ann_cmd) return cmd_annotate(queue_path, labels_path, annotator);
        if (*train_cmd) return cmd_train(train_labels, model_out, train_opt);
        if (*render_cmd) {
            return cmd_render(render_text, render_strength, render_out, render_font, render_seed);
        }
        if (*prep_cmd) return cmd_corpus_prep(manifest_path, prep_out);
        if (*report_cmd) return cmd_report(records_path);
    } catch (const scrawl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == scrawl::ErrorCode::ConfigError ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
