#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "scrawl/scorer_client.hpp"

#include "support/matchers.hpp"

using namespace scrawl;
using testutil::HasErrorCode;

namespace {
std::string scorer_bin() { return SCRAWL_MOCK_SCORER; }
}

TEST_CASE("scorer echoes a probability per request", "[scorer]") {
    ScorerClient client(scorer_bin() + " ok");
    CHECK(client.score("please keep this one") == 0.9);
    CHECK(client.score("drop that one") == 0.1);
    CHECK(client.score("keep again") == 0.9);
    CHECK(client.alive());
    client.shutdown();
}

TEST_CASE("scorer with a constant reply", "[scorer]") {
    ScorerClient client(scorer_bin() + " const 0.75");
    CHECK(client.score("anything") == 0.75);
    client.shutdown();
}

TEST_CASE("garbage replies are protocol errors", "[scorer]") {
    ScorerClient client(scorer_bin() + " garbage");
    CHECK_THROWS_MATCHES(client.score("text"), Error,
                         HasErrorCode(ErrorCode::ProtocolError));
}

TEST_CASE("a silent scorer times out", "[scorer]") {
    ScorerClient client(scorer_bin() + " silent", 200);
    CHECK_THROWS_MATCHES(client.score("text"), Error, HasErrorCode(ErrorCode::Timeout));
}

TEST_CASE("mismatched response ids are protocol errors", "[scorer]") {
    ScorerClient client(scorer_bin() + " wrongid");
    CHECK_THROWS_MATCHES(client.score("text"), Error,
                         HasErrorCode(ErrorCode::ProtocolError));
}

TEST_CASE("out-of-range probabilities are protocol errors", "[scorer]") {
    ScorerClient client(scorer_bin() + " badp");
    CHECK_THROWS_MATCHES(client.score("text"), Error,
                         HasErrorCode(ErrorCode::ProtocolError));
}

TEST_CASE("a dying scorer is reported as scorer failure", "[scorer]") {
    ScorerClient client(scorer_bin() + " die");
    CHECK_THROWS_MATCHES(client.score("text"), Error,
                         HasErrorCode(ErrorCode::ScorerFailure));
}

TEST_CASE("writes after the child died are scorer failures", "[scorer]") {
    ScorerClient client(scorer_bin() + " die");
    try {
        client.score("first");
    } catch (const Error&) {
    }
    // the pipe is now closed on both ends; further requests must not hang
    CHECK_THROWS_MATCHES(client.score("second"), Error,
                         HasErrorCode(ErrorCode::ScorerFailure));
}

TEST_CASE("shutdown ends the child cleanly", "[scorer]") {
    ScorerClient client(scorer_bin() + " ok");
    CHECK(client.score("one keep") == 0.9);
    client.shutdown();
    CHECK_FALSE(client.alive());
}
