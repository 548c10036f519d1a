#include "puppetwire/types.hpp"

#include <array>
#include <cstdio>
#include <utility>

namespace puppetwire {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<std::string_view, E>, N>& table, std::string_view s) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<std::string_view, E>, N>& table, E v) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, Component>, 3> kComponents{{
    {"face", Component::Face}, {"background", Component::Background}, {"text", Component::Text}}};

constexpr std::array<std::pair<std::string_view, EmotionTemplate>, 7> kTemplates{{
    {"neutral", EmotionTemplate::Neutral},
    {"happy", EmotionTemplate::Happy},
    {"sad", EmotionTemplate::Sad},
    {"fearful", EmotionTemplate::Fearful},
    {"angry", EmotionTemplate::Angry},
    {"surprised", EmotionTemplate::Surprised},
    {"disgusted", EmotionTemplate::Disgusted}}};

constexpr std::array<std::pair<std::string_view, Direction>, 2> kDirections{{
    {"left_to_right", Direction::LeftToRight}, {"right_to_left", Direction::RightToLeft}}};

constexpr std::array<std::pair<std::string_view, ParticlePattern>, 3> kPatterns{{
    {"jet", ParticlePattern::Jet}, {"exploding", ParticlePattern::Exploding}, {"rain", ParticlePattern::Rain}}};

constexpr std::array<std::pair<std::string_view, Level>, 3> kLevels{{
    {"low", Level::Low}, {"med", Level::Med}, {"high", Level::High}}};

constexpr std::array<std::pair<std::string_view, Axis>, 2> kAxes{{{"x", Axis::X}, {"y", Axis::Y}}};

constexpr std::array<std::pair<std::string_view, Character>, 2> kCharacters{{
    {"boy", Character::Boy}, {"girl", Character::Girl}}};

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_string(Rgb color) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", color.r, color.g, color.b);
  return buf;
}

std::optional<Rgb> parse_rgb(std::string_view text) {
  if (text.size() != 7 || text[0] != '#') return std::nullopt;
  std::array<std::uint8_t, 3> channels{};
  for (std::size_t i = 0; i < 3; ++i) {
    const int hi = hex_digit(text[1 + 2 * i]);
    const int lo = hex_digit(text[2 + 2 * i]);
    if (hi < 0 || lo < 0) return std::nullopt;
    channels[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return Rgb{channels[0], channels[1], channels[2]};
}

std::string_view to_string(Component v) { return name_of(kComponents, v); }
std::string_view to_string(EmotionTemplate v) { return name_of(kTemplates, v); }
std::string_view to_string(Direction v) { return name_of(kDirections, v); }
std::string_view to_string(ParticlePattern v) { return name_of(kPatterns, v); }
std::string_view to_string(Level v) { return name_of(kLevels, v); }
std::string_view to_string(Axis v) { return name_of(kAxes, v); }
std::string_view to_string(Character v) { return name_of(kCharacters, v); }

std::optional<Component> parse_component(std::string_view s) { return lookup(kComponents, s); }
std::optional<EmotionTemplate> parse_emotion_template(std::string_view s) { return lookup(kTemplates, s); }
std::optional<Direction> parse_direction(std::string_view s) { return lookup(kDirections, s); }
std::optional<ParticlePattern> parse_particle_pattern(std::string_view s) { return lookup(kPatterns, s); }
std::optional<Level> parse_level(std::string_view s) { return lookup(kLevels, s); }
std::optional<Axis> parse_axis(std::string_view s) { return lookup(kAxes, s); }
std::optional<Character> parse_character(std::string_view s) { return lookup(kCharacters, s); }

}  // namespace puppetwire
