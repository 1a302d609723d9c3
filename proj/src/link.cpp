#include "scss/link.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "scss/errors.hpp"

namespace scss::link {

namespace {

constexpr std::array<std::uint8_t, 256> make_crc_table() {
    std::array<std::uint8_t, 256> table{};
    for (int i = 0; i < 256; ++i) {
        auto crc = static_cast<std::uint8_t>(i);
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 0x80) ? static_cast<std::uint8_t>((crc << 1) ^ 0x07)
                               : static_cast<std::uint8_t>(crc << 1);
        table[static_cast<std::size_t>(i)] = crc;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

// Payload length required by each known type, 0 for unknown types.
std::size_t payload_length(std::uint8_t type) {
    switch (type) {
        case kTypeBrakeCmd: return 4;
        case kTypeHeartbeat: return 5;
        case kTypeAck: return 1;
        default: return 0;
    }
}

Bytes frame(std::uint8_t type, std::initializer_list<std::uint8_t> payload) {
    Bytes out;
    out.reserve(kFrameOverhead + payload.size());
    out.push_back(kStartOfFrame);
    out.push_back(type);
    out.push_back(static_cast<std::uint8_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    out.push_back(crc8(std::span(out).subspan(1)));
    return out;
}

// Payload values are checked again here; a CRC-valid frame can still be nonsense.
std::optional<Message> parse_payload(std::uint8_t type, std::span<const std::uint8_t> p) {
    switch (type) {
        case kTypeBrakeCmd:
            if (p[1] > 1 || p[2] > 100) return std::nullopt;
            return BrakeCmd{p[0], p[1] == 1, p[2], p[3]};
        case kTypeHeartbeat: {
            const std::uint32_t ms = static_cast<std::uint32_t>(p[1]) |
                                     static_cast<std::uint32_t>(p[2]) << 8 |
                                     static_cast<std::uint32_t>(p[3]) << 16 |
                                     static_cast<std::uint32_t>(p[4]) << 24;
            return Heartbeat{p[0], ms};
        }
        case kTypeAck:
            return Ack{p[0]};
        default:
            return std::nullopt;
    }
}

}  // namespace

std::uint8_t sequence_of(const Message& msg) {
    return std::visit([](const auto& m) { return m.seq; }, msg);
}

std::uint8_t crc8(std::span<const std::uint8_t> data) {
    std::uint8_t crc = 0x00;
    for (std::uint8_t b : data) crc = kCrcTable[crc ^ b];
    return crc;
}

Bytes encode_frame(const Message& msg) {
    if (const auto* cmd = std::get_if<BrakeCmd>(&msg)) {
        if (cmd->duty_percent > 100)
            throw std::invalid_argument("BRAKE_CMD duty_percent " + std::to_string(cmd->duty_percent) +
                                        " exceeds 100");
        return frame(kTypeBrakeCmd, {cmd->seq, static_cast<std::uint8_t>(cmd->active ? 1 : 0),
                                     cmd->duty_percent, cmd->freq_decihertz});
    }
    if (const auto* hb = std::get_if<Heartbeat>(&msg)) {
        const std::uint32_t t = hb->time_ms;
        return frame(kTypeHeartbeat,
                     {hb->seq, static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(t >> 8),
                      static_cast<std::uint8_t>(t >> 16), static_cast<std::uint8_t>(t >> 24)});
    }
    return frame(kTypeAck, {std::get<Ack>(msg).seq});
}

DecodeResult decode_stream(std::span<const std::uint8_t> accumulator,
                           std::span<const std::uint8_t> incoming) {
    Bytes buf;
    buf.reserve(accumulator.size() + incoming.size());
    buf.insert(buf.end(), accumulator.begin(), accumulator.end());
    buf.insert(buf.end(), incoming.begin(), incoming.end());

    DecodeResult out;
    std::size_t pos = 0;
    while (pos < buf.size()) {
        if (buf[pos] != kStartOfFrame) {
            ++pos;
            continue;
        }
        const std::size_t avail = buf.size() - pos;
        if (avail < 3) break;

        const std::uint8_t type = buf[pos + 1];
        const std::uint8_t len = buf[pos + 2];
        if (len > kMaxPayload || payload_length(type) == 0 || payload_length(type) != len) {
            ++out.errors;
            ++pos;
            continue;
        }
        const std::size_t total = kFrameOverhead + len;
        if (avail < total) break;

        const auto body = std::span<const std::uint8_t>(buf).subspan(pos + 1, 2 + len);
        if (crc8(body) != buf[pos + total - 1]) {
            ++out.errors;
            ++pos;
            continue;
        }
        auto msg = parse_payload(type, body.subspan(2));
        if (!msg) {
            ++out.errors;
            ++pos;
            continue;
        }
        out.messages.push_back(*msg);
        pos += total;
    }

    out.consumed = pos;
    out.accumulator.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos), buf.end());
    return out;
}

FuzzReport fuzz_decoder(std::size_t total_bytes, std::uint64_t seed) {
    RandomStream rng(seed);
    FuzzReport report;
    Bytes acc;
    Bytes chunk;
    while (report.bytes_fed < total_bytes) {
        const std::size_t n = std::min<std::size_t>(1 + rng.next_u64() % 64, total_bytes - report.bytes_fed);
        chunk.resize(n);
        for (auto& b : chunk) b = static_cast<std::uint8_t>(rng.next_u64());
        const std::size_t fed = acc.size() + n;
        auto r = decode_stream(acc, chunk);
        if (r.consumed + r.accumulator.size() != fed) report.conservation_held = false;
        report.bytes_fed += n;
        report.messages += r.messages.size();
        report.errors += r.errors;
        acc = std::move(r.accumulator);
        report.max_retained = std::max(report.max_retained, acc.size());
    }
    return report;
}

void validate(const ChannelModel& model) {
    if (!(model.latency >= 0.0) || !std::isfinite(model.latency))
        throw ValidationError("link.latency", "must be >= 0");
    if (!(model.byte_drop_prob >= 0.0 && model.byte_drop_prob <= 1.0))
        throw ValidationError("link.byte_drop_prob", "must be in [0, 1]");
}

Channel::Channel(ChannelModel model) : model_(model), rng_(model.seed) {}

void Channel::submit(std::span<const std::uint8_t> bytes, double now) {
    for (std::uint8_t b : bytes) {
        if (rng_.bernoulli(model_.byte_drop_prob)) continue;
        queue_.push_back({now + model_.latency, now, b});
    }
}

Bytes Channel::step(double now) {
    constexpr double eps = 1e-9;
    Bytes out;
    while (!queue_.empty() && queue_.front().due <= now + eps && queue_.front().sent < now - eps) {
        out.push_back(queue_.front().byte);
        queue_.pop_front();
    }
    return out;
}

}  // namespace scss::link
