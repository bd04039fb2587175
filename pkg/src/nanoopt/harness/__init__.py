from .campaign import run_campaign
from .config import CampaignConfig, resolve
from .gradcheck import GradCheckReport, gradient_check
from .oracle import OracleResult, brute_force_oracle

__all__ = ["run_campaign", "CampaignConfig", "resolve", "GradCheckReport",
           "gradient_check", "OracleResult", "brute_force_oracle"]
