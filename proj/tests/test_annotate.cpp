#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "scrawl/annotate.hpp"

#include "support/matchers.hpp"
#include "support/test_util.hpp"

using namespace scrawl;
using testutil::HasErrorCode;

namespace {

AnnotateOptions fixed_clock_options(const std::string& annotator = "sam") {
    AnnotateOptions opt;
    opt.annotator = annotator;
    opt.clock = [n = int64_t{1700000000}]() mutable { return n++; };
    return opt;
}

const char* kQueue = "{\"text\": \"the first line waits.\", \"chunk_id\": 0}\n"
                     "\n"
                     "{\"text\": \"a second line follows.\", \"origin\": \"markov\"}\n"
                     "{\"text\": \"the third line ends it.\"}\n";

} // namespace

TEST_CASE("queue files are jsonl with a text field, extras ignored", "[annotate]") {
    testutil::TempDir tmp;
    const auto path = tmp.file("queue.jsonl");
    testutil::write_file(path, kQueue);
    const std::vector<std::string> q = load_annotation_queue(path);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == "the first line waits.");
    CHECK(q[1] == "a second line follows.");
    CHECK(q[2] == "the third line ends it.");
}

TEST_CASE("queue file errors", "[annotate]") {
    testutil::TempDir tmp;
    CHECK_THROWS_MATCHES(load_annotation_queue(tmp.file("absent.jsonl")), Error,
                         HasErrorCode(ErrorCode::FileMissing));

    const auto broken = tmp.file("broken.jsonl");
    testutil::write_file(broken, "{\"text\": \"fine\"}\nnot json\n");
    try {
        load_annotation_queue(broken);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    const auto textless = tmp.file("textless.jsonl");
    testutil::write_file(textless, "{\"chunk_id\": 3}\n");
    CHECK_THROWS_MATCHES(load_annotation_queue(textless), Error,
                         HasErrorCode(ErrorCode::ParseError));
}

TEST_CASE("good, bad and skip drive the label file", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, kQueue);

    std::istringstream in("g\nb\ns\n");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 2);
    CHECK(r.skipped == 1);
    CHECK(r.remaining == 0);

    const std::vector<LabeledChunk> got = load_labels(labels);
    REQUIRE(got.size() == 2);
    CHECK(got[0].text == "the first line waits.");
    CHECK(got[0].label == Label::Good);
    CHECK(got[0].annotator == "sam");
    CHECK(got[0].ts == 1700000000);
    CHECK(got[1].text == "a second line follows.");
    CHECK(got[1].label == Label::Bad);
    CHECK(got[1].ts == 1700000001);

    CHECK(out.str().find("[1/3]") != std::string::npos);
    CHECK(out.str().find("[3/3]") != std::string::npos);
}

TEST_CASE("full words work as answers too", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, "{\"text\": \"only one line here.\"}\n");

    std::istringstream in("GOOD\n");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 1);
    CHECK(load_labels(labels)[0].label == Label::Good);
}

TEST_CASE("unrecognized keys re-prompt without consuming the chunk", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, "{\"text\": \"only one line here.\"}\n");

    std::istringstream in("x\n\nb\n");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 1);
    CHECK(out.str().find("please answer") != std::string::npos);
    CHECK(load_labels(labels)[0].label == Label::Bad);
}

TEST_CASE("quit stops early and reports what is left", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, kQueue);

    std::istringstream in("g\nq\n");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 1);
    CHECK(r.remaining == 2);
    CHECK(load_labels(labels).size() == 1);
}

TEST_CASE("end of input behaves like quit", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, kQueue);

    std::istringstream in("");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 0);
    CHECK(r.remaining == 3);
}

TEST_CASE("reruns resume past texts already labeled", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, kQueue);

    {
        std::istringstream in("g\nb\ns\n");
        std::ostringstream out;
        annotate(queue, labels, in, out, fixed_clock_options());
    }

    // only the skipped third text is still pending
    std::istringstream in("g\n");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options("kit"));
    CHECK(r.labeled == 1);
    CHECK(r.remaining == 0);
    CHECK(out.str().find("[1/1]") != std::string::npos);

    const std::vector<LabeledChunk> got = load_labels(labels);
    REQUIRE(got.size() == 3);
    CHECK(got[2].text == "the third line ends it.");
    CHECK(got[2].annotator == "kit");
}

TEST_CASE("a fully labeled queue asks nothing", "[annotate]") {
    testutil::TempDir tmp;
    const auto queue = tmp.file("queue.jsonl");
    const auto labels = tmp.file("labels.jsonl");
    testutil::write_file(queue, kQueue);

    {
        std::istringstream in("g\ng\ng\n");
        std::ostringstream out;
        annotate(queue, labels, in, out, fixed_clock_options());
    }
    std::istringstream in("");
    std::ostringstream out;
    const AnnotateResult r = annotate(queue, labels, in, out, fixed_clock_options());
    CHECK(r.labeled == 0);
    CHECK(r.skipped == 0);
    CHECK(r.remaining == 0);
    CHECK(out.str().empty());
}
