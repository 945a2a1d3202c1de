#include <doctest.h>

#include "logbed/core/hashio.hpp"
#include "logbed/core/rng.hpp"
#include "logbed/core/text.hpp"

using namespace logbed;

TEST_CASE("base64 matches RFC 4648 vectors") {
    CHECK(text::base64_encode("") == "");
    CHECK(text::base64_encode("f") == "Zg==");
    CHECK(text::base64_encode("fo") == "Zm8=");
    CHECK(text::base64_encode("foo") == "Zm9v");
    CHECK(text::base64_encode("foob") == "Zm9vYg==");
    CHECK(text::base64_encode("fooba") == "Zm9vYmE=");
    CHECK(text::base64_encode("foobar") == "Zm9vYmFy");
    CHECK(*text::base64_decode("Zm9vYmFy") == "foobar");
    CHECK(!text::base64_decode("Zm9vYmF").has_value());
    CHECK(!text::base64_decode("Zm=vYmFy").has_value());
}

TEST_CASE("base64 round-trips arbitrary bytes") {
    rng::Stream s(5);
    for (int len = 0; len < 200; ++len) {
        std::string bytes;
        for (int i = 0; i < len; ++i)
            bytes += static_cast<char>(s.uniform_int(0, 255));
        CHECK(*text::base64_decode(text::base64_encode(bytes)) == bytes);
    }
}

TEST_CASE("zlib and gzip round-trip") {
    std::string payload;
    rng::Stream s(11);
    for (int i = 0; i < 40000; ++i)
        payload += static_cast<char>('a' + s.uniform_int(0, 15));
    CHECK(hashio::zlib_decompress(hashio::zlib_compress(payload)) == payload);
    CHECK(hashio::gzip_decompress(hashio::gzip_compress(payload)) == payload);
    CHECK(hashio::gzip_compress(payload).size() < payload.size());
}

TEST_CASE("sha256 matches published vectors") {
    CHECK(hashio::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hashio::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("string helpers") {
    CHECK(text::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(text::join({"x", "y", "z"}, "::") == "x::y::z");
    CHECK(text::starts_with("query[A]", "query["));
    CHECK(text::ends_with("cloud.corp.com", ".corp.com"));
    CHECK(text::lower("AbC-9") == "abc-9");
    CHECK(text::fixed2(3.14159) == "3.14");
    CHECK(text::fixed2(2.0) == "2.00");
    CHECK(*text::to_int("-42") == -42);
    CHECK(!text::to_int("12x").has_value());
}
