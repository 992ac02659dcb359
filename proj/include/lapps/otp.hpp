#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lapps/sha512.hpp"

namespace lapps::otp {

inline constexpr std::int64_t kMinuteMs = 60'000;

/// The 62-character set passwords draw from unless a deployment opts into a
/// custom alphabet through its properties file.
inline constexpr std::string_view kDefaultAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

/// Eight decimal digits; the short-lived code a user presents alongside a
/// password request.
struct Pin {
    std::string digits;

    static bool valid(std::string_view s) {
        return s.size() == 8 &&
               std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    }

    static std::optional<Pin> parse(std::string_view s) {
        if (!valid(s)) return std::nullopt;
        return Pin{std::string(s)};
    }

    bool operator==(const Pin&) const = default;
};

/// Epoch milliseconds floored to a whole minute; the time salt for pins.
struct MinuteStamp {
    std::int64_t epoch_ms = 0;
    bool operator==(const MinuteStamp&) const = default;
};

inline MinuteStamp floor_to_minute(std::int64_t now_ms) {
    if (now_ms < 0) throw std::invalid_argument("floor_to_minute: negative time");
    return MinuteStamp{now_ms - now_ms % kMinuteMs};
}

/// First four decimal digits of `hex` scanned left to right, then the first
/// four of the reversed string. A half with fewer than four digits is padded
/// on the right with '0' (vanishingly rare for real digests, but total).
inline Pin extract_pin_digits(std::string_view hex) {
    const auto scan = [](auto begin, auto end) {
        std::string out;
        for (auto it = begin; it != end && out.size() < 4; ++it) {
            if (*it >= '0' && *it <= '9') out.push_back(*it);
        }
        out.resize(4, '0');
        return out;
    };
    return Pin{scan(hex.begin(), hex.end()) + scan(hex.rbegin(), hex.rend())};
}

/// Pin for one user and one minute: digit extraction over
/// sha512_hex(fp_hash ‖ decimal stamp milliseconds ‖ user_id).
inline Pin generate_pin(std::string_view fp_hash, std::string_view user_id, MinuteStamp stamp) {
    if (!is_sha512_hex(fp_hash)) {
        throw std::invalid_argument("generate_pin: fp_hash must be 128 lowercase hex chars");
    }
    if (user_id.empty()) throw std::invalid_argument("generate_pin: empty user id");
    std::string material;
    material.reserve(fp_hash.size() + 20 + user_id.size());
    material.append(fp_hash);
    material.append(std::to_string(stamp.epoch_ms));
    material.append(user_id);
    return extract_pin_digits(sha512_hex(material));
}

/// True when `received` matches the pin of the current minute or of the one
/// before it. No other stamps are consulted, so a pin stays valid for less
/// than two minutes after the minute it was generated in.
inline bool validate_pin(const Pin& received, std::string_view fp_hash,
                         std::string_view user_id, std::int64_t now_ms) {
    const MinuteStamp current = floor_to_minute(now_ms);
    if (generate_pin(fp_hash, user_id, current) == received) return true;
    if (current.epoch_ms < kMinuteMs) return false;
    return generate_pin(fp_hash, user_id, MinuteStamp{current.epoch_ms - kMinuteMs}) == received;
}

/// A single-use credential: the plaintext handed back to the requester and
/// the SHA-512 digest that is the only form ever persisted.
struct Password {
    std::string plaintext;
    std::string digest;
};

template <typename Urbg>
Password generate_password(Urbg& rng, std::size_t length,
                           std::string_view alphabet = kDefaultAlphabet) {
    if (length < 1) throw std::invalid_argument("generate_password: length must be >= 1");
    if (alphabet.empty()) throw std::invalid_argument("generate_password: empty alphabet");
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    Password pw;
    pw.plaintext.reserve(length);
    for (std::size_t i = 0; i < length; ++i) pw.plaintext.push_back(alphabet[pick(rng)]);
    pw.digest = sha512_hex(pw.plaintext);
    return pw;
}

struct GenerationExhausted : std::runtime_error {
    GenerationExhausted() : std::runtime_error("password generation: retry limit exceeded") {}
};

/// Redraws until `exists(digest)` reports the candidate as unseen.
template <typename Urbg, typename ExistsFn>
Password generate_unique_password(Urbg& rng, std::size_t length, std::string_view alphabet,
                                  ExistsFn&& exists, int max_attempts = 1000) {
    for (int i = 0; i < max_attempts; ++i) {
        Password pw = generate_password(rng, length, alphabet);
        if (!exists(pw.digest)) return pw;
    }
    throw GenerationExhausted{};
}

}  // namespace lapps::otp
