#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <variant>
#include <vector>

#include "scss/rng.hpp"

namespace scss::link {

// Wire layout: SOF | type | length | payload[length] | crc8(type, length, payload)
inline constexpr std::uint8_t kStartOfFrame = 0xAA;
inline constexpr std::uint8_t kTypeBrakeCmd = 0x10;
inline constexpr std::uint8_t kTypeHeartbeat = 0x11;
inline constexpr std::uint8_t kTypeAck = 0x20;
inline constexpr std::size_t kMaxPayload = 16;
inline constexpr std::size_t kFrameOverhead = 4;

struct BrakeCmd {
    std::uint8_t seq = 0;
    bool active = false;
    std::uint8_t duty_percent = 0;    // 0..100
    std::uint8_t freq_decihertz = 0;  // pulse rate in 0.1 Hz

    bool operator==(const BrakeCmd&) const = default;
};

struct Heartbeat {
    std::uint8_t seq = 0;
    std::uint32_t time_ms = 0;

    bool operator==(const Heartbeat&) const = default;
};

struct Ack {
    std::uint8_t seq = 0;

    bool operator==(const Ack&) const = default;
};

using Message = std::variant<BrakeCmd, Heartbeat, Ack>;
using Bytes = std::vector<std::uint8_t>;

std::uint8_t sequence_of(const Message& msg);

// CRC-8, polynomial 0x07, init 0x00, no reflection, no final xor.
std::uint8_t crc8(std::span<const std::uint8_t> data);

// Throws std::invalid_argument for out-of-range fields.
Bytes encode_frame(const Message& msg);

struct DecodeResult {
    std::vector<Message> messages;
    Bytes accumulator;
    std::size_t errors = 0;    // malformed frames (bad type, length, crc or payload)
    std::size_t consumed = 0;  // bytes discarded or decoded this call
};

// Stream decoder. Bad candidates cost one byte and scanning resumes at the next SOF.
// consumed + accumulator.size() always equals the bytes fed (old accumulator + incoming).
DecodeResult decode_stream(std::span<const std::uint8_t> accumulator,
                           std::span<const std::uint8_t> incoming);

struct FuzzReport {
    std::size_t bytes_fed = 0;
    std::size_t messages = 0;
    std::size_t errors = 0;
    std::size_t max_retained = 0;
    bool conservation_held = true;
};

// Feed `total_bytes` seeded random bytes to decode_stream in random-sized chunks.
FuzzReport fuzz_decoder(std::size_t total_bytes, std::uint64_t seed);

struct ChannelModel {
    double latency = 0.002;     // s
    double byte_drop_prob = 0.0;
    std::uint64_t seed = 1;
};

void validate(const ChannelModel& model);

// One-way byte pipe with independent per-byte loss and a fixed delay.
class Channel {
public:
    explicit Channel(ChannelModel model);

    void submit(std::span<const std::uint8_t> bytes, double now);

    // Bytes whose delay has elapsed by `now`, in submission order. Bytes submitted at
    // `now` itself are never returned by the same call.
    Bytes step(double now);

    std::size_t in_flight() const { return queue_.size(); }

private:
    struct Pending {
        double due = 0.0;
        double sent = 0.0;
        std::uint8_t byte = 0;
    };

    ChannelModel model_;
    RandomStream rng_;
    std::deque<Pending> queue_;
};

}  // namespace scss::link
