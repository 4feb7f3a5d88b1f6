#pragma once

#define QTOW_VERSION "0.1.0"
