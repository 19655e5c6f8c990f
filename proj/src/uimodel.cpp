/*
 * Copyright (C) 2026 The ctxmonkey Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ctxmonkey/uimodel.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

#include "ctxmonkey/device.h"
#include "ctxmonkey/errors.h"

namespace ctxmonkey {

namespace pt = boost::property_tree;

namespace {

bool IsEditable(const pt::ptree& attrs, const std::string& class_name) {
    if (class_name.find("EditText") != std::string::npos) return true;
    return attrs.get<std::string>("editable", "false") == "true";
}

void Flatten(const pt::ptree& node, std::vector<UiElement>& out) {
    for (const auto& [name, child] : node) {
        if (name != "node") continue;
        const pt::ptree& attrs = child.get_child("<xmlattr>", pt::ptree());
        UiElement e;
        e.class_name = attrs.get<std::string>("class", "");
        e.resource_id = attrs.get<std::string>("resource-id", "");
        e.text = attrs.get<std::string>("text", "");
        e.bounds = ParseBounds(attrs.get<std::string>("bounds", "[0,0][0,0]"));
        e.editable = IsEditable(attrs, e.class_name);
        e.focused = attrs.get<std::string>("focused", "false") == "true";
        out.push_back(std::move(e));
        Flatten(child, out);
    }
}

}  // namespace

ElementIdentity IdentityOf(const UiElement& e) {
    return {e.class_name, e.resource_id, e.text};
}

Bounds ParseBounds(std::string_view text) {
    Bounds b;
    int consumed = 0;
    std::string s(text);
    if (std::sscanf(s.c_str(), "[%d,%d][%d,%d]%n", &b.left, &b.top, &b.right, &b.bottom,
                    &consumed) != 4 ||
        static_cast<std::size_t>(consumed) != s.size()) {
        throw ParseError(fmt::format("malformed bounds '{}'", text));
    }
    if (b.left < 0 || b.top < 0 || b.left > b.right || b.top > b.bottom) {
        throw ParseError(fmt::format("invalid bounds '{}'", text));
    }
    return b;
}

UiSnapshot ParseUiDump(std::string_view xml, std::string_view activity) {
    pt::ptree tree;
    std::istringstream in{std::string(xml)};
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(fmt::format("malformed hierarchy XML: {}", e.message()), e.line());
    }
    auto root = tree.get_child_optional("hierarchy");
    if (!root) throw ParseError("hierarchy element missing");
    UiSnapshot snapshot;
    snapshot.activity = std::string(activity);
    Flatten(*root, snapshot.elements);
    return snapshot;
}

CollectResult CollectAllElements(DeviceBackend& device, std::string_view activity,
                                 std::size_t max_scrolls) {
    CollectResult result;
    result.snapshot.activity = std::string(activity);
    std::set<ElementIdentity> seen;
    for (;;) {
        UiSnapshot dump = ParseUiDump(device.UiDump(), activity);
        ++result.dumps;
        std::size_t added = 0;
        for (auto& e : dump.elements) {
            if (seen.insert(IdentityOf(e)).second) {
                result.snapshot.elements.push_back(std::move(e));
                ++added;
            }
        }
        if (added == 0) break;
        if (result.scrolls >= max_scrolls) {
            result.truncated = true;
            break;
        }
        device.ScrollDown();
        ++result.scrolls;
    }
    return result;
}

std::vector<UiElement> TextFields(const UiSnapshot& snapshot) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < snapshot.elements.size(); ++i) {
        if (snapshot.elements[i].editable) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Bounds& x = snapshot.elements[a].bounds;
        const Bounds& y = snapshot.elements[b].bounds;
        return std::tie(x.top, x.left) < std::tie(y.top, y.left);
    });
    std::vector<UiElement> fields;
    fields.reserve(order.size());
    for (std::size_t i : order) fields.push_back(snapshot.elements[i]);
    return fields;
}

}  // namespace ctxmonkey
