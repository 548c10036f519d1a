#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace puppetwire {

/// A point or vector in scene coordinates (origin top-left, y down, unit square).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// Formats as "#RRGGBB" (upper-case hex).
std::string to_string(Rgb color);
/// Accepts "#RRGGBB" in either case.
std::optional<Rgb> parse_rgb(std::string_view text);

enum class Component { Face, Background, Text };
enum class EmotionTemplate { Neutral, Happy, Sad, Fearful, Angry, Surprised, Disgusted };
enum class Direction { LeftToRight, RightToLeft };
enum class ParticlePattern { Jet, Exploding, Rain };
enum class Level { Low, Med, High };
enum class Axis { X, Y };
enum class Character { Boy, Girl };

std::string_view to_string(Component v);
std::string_view to_string(EmotionTemplate v);
std::string_view to_string(Direction v);
std::string_view to_string(ParticlePattern v);
std::string_view to_string(Level v);
std::string_view to_string(Axis v);
std::string_view to_string(Character v);

std::optional<Component> parse_component(std::string_view s);
std::optional<EmotionTemplate> parse_emotion_template(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<ParticlePattern> parse_particle_pattern(std::string_view s);
std::optional<Level> parse_level(std::string_view s);
std::optional<Axis> parse_axis(std::string_view s);
std::optional<Character> parse_character(std::string_view s);

}  // namespace puppetwire
