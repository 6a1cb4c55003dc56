// Copyright 2026 The ctlmon Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ctlmon/errors.hpp"

#include <filesystem>

namespace ctlmon {

int status_of(std::exception_ptr error, std::string& message) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    message = e.what();
    return 1;
  } catch (const UndefinedMetric& e) {
    message = e.what();
    return 1;
  } catch (const ContractViolation& e) {
    message = e.what();
    return 1;
  } catch (const IoError& e) {
    message = e.what();
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    message = e.what();
    return 3;
  } catch (const DesignDefect& e) {
    message = e.what();
    return 2;
  } catch (const std::exception& e) {
    message = std::string("internal error: ") + e.what();
    return 2;
  } catch (...) {
    message = "internal error";
    return 2;
  }
}

}  // namespace ctlmon
