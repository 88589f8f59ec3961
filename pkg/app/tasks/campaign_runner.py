"""
Campaign Runner
Runs every claim of a verification campaign, optionally in worker processes
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from typing import List, Optional

from tqdm import tqdm

from app.models.campaign import CampaignConfig, ClaimRecord, ClaimSpec, VerificationReport
from app.repos.artifact_repo import ArtifactRepository
from app.services.verification_service import build_claims, run_claim

logger = logging.getLogger(__name__)


def _run_serial(claims: List[ClaimSpec], progress: bool) -> List[ClaimRecord]:
    return [run_claim(spec) for spec in tqdm(claims, desc="claims", unit="claim", disable=not progress)]


def _run_parallel(claims: List[ClaimSpec], jobs: int, progress: bool) -> List[ClaimRecord]:
    # map() yields in submission order, so the merge is deterministic
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(run_claim, claims)
        return list(tqdm(results, total=len(claims), desc="claims", unit="claim", disable=not progress))


def run_campaign(
    config: CampaignConfig,
    progress: bool = True,
    minor_search_limit: Optional[int] = None,
    claims: Optional[List[ClaimSpec]] = None,
) -> VerificationReport:
    """Run the campaign; a tripped resource guard aborts it with GuardExceededError"""
    claims = build_claims(config, minor_search_limit) if claims is None else claims
    logger.info(f"Starting campaign: {len(claims)} claims, {config.jobs} job(s)")
    if config.jobs > 1 and len(claims) > 1:
        records = _run_parallel(claims, config.jobs, progress)
    else:
        records = _run_serial(claims, progress)

    report = VerificationReport(claims=records, generated_at=datetime.now(timezone.utc).isoformat())
    logger.info(f"Campaign finished: {report.counts()}, {len(report.unexpected)} unexpected")
    for record in report.unexpected:
        logger.warning(f"Unexpected status for {record.id}: {record.status.value} (expected {record.expected.value})")
    return report


def write_report(report: VerificationReport, repo: ArtifactRepository, config: CampaignConfig,
                 deterministic: bool = True):
    name = config.report_path or "report.json"
    return repo.save_report(report, name, deterministic=deterministic)
