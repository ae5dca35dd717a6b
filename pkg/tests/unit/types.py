from typing import Literal

ExactScenarios = Literal[
    "FT-1", "FT-2", "FT-3", "ST-3", "EQ-1", "BR-1", "MT-1", "EN-1", "IN-1", "IN-2", "PL-1", "QF-1", "QF-2", "QF-3",
    "QF-4", "KK-3", "MX-1",
]
TrackedScenarios = Literal[
    "ST-1", "ST-2", "ST-5", "ST-6", "BR-2", "BR-3", "MT-2", "EN-2", "EN-3", "EN-4", "PL-2", "PL-3", "KK-1", "KK-4",
    "MX-2", "MX-3",
]
ArithmeticScenarios = Literal["ST-4", "EX-1", "EX-2", "EX-3", "MAIN-1"]
ReportOnlyScenarios = Literal["KK-2"]
