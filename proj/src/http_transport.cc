//
// Copyright 2026 The Unicloak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <string>

#include "httplib.h"
#include "unicloak/chat_model.h"

namespace unicloak {
namespace {

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url, const HttpHeaders& headers,
                    const std::string& body,
                    std::chrono::milliseconds timeout) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      return {0, "", "endpoint is not an absolute URL: " + url};
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [name, value] : headers) {
      if (name == "Content-Type") {
        content_type = value;
      } else {
        h.emplace(name, value);
      }
    }
    auto result = client.Post(path, h, body, content_type);
    if (!result) return {0, "", httplib::to_string(result.error())};
    return {result->status, result->body, ""};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> MakeHttplibTransport() {
  return std::make_unique<HttplibTransport>();
}

}  // namespace unicloak
