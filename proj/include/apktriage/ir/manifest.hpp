// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apktriage::ir
{

enum class ComponentKind
{
    Activity,
    Service,
    Receiver,
    Provider
};

std::string_view to_string(ComponentKind kind) noexcept;
std::optional<ComponentKind> component_kind_from_string(std::string_view text) noexcept;

struct Component
{
    std::string name; // class name
    ComponentKind kind = ComponentKind::Activity;
    std::vector<std::string> intent_actions;
    bool exported = false;

    friend bool operator==(const Component&, const Component&) = default;
};

struct Manifest
{
    std::string package;
    std::string category;
    std::string description;
    std::vector<std::string> permissions;
    std::vector<Component> components;

    [[nodiscard]] const Component* find_component(std::string_view class_name) const noexcept;
    [[nodiscard]] bool requests(std::string_view permission) const noexcept;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Parses `.mmf` text. Permission names are stored without an
/// `android.permission.` prefix. Throws SyntaxError.
Manifest parse_manifest(std::string_view text);

std::string render_manifest(const Manifest& manifest);

} // namespace apktriage::ir
