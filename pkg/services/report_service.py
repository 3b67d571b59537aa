import json
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from cryptography.hazmat.primitives import hashes

from config import Config
from services.exactla import Matrix, Subspace
from services.file_processor import matrix_to_payload, vector_to_payload
from services.homlie import Verdict


class ReportService:
    """
    Relatórios determinísticos do CLI: mesma entrada, mesmos bytes.
    Sem timestamps, sem tempos de execução, sem caminhos absolutos.
    """

    @staticmethod
    def create_report(command: Dict[str, Any], inputs: Iterable[Tuple[str, bytes]],
                      result: Dict[str, Any]) -> Dict:
        return {
            'schema': Config.REPORT_SCHEMA,
            'command': command,
            'inputs': [{'path': path, 'sha256': ReportService.digest(raw)} for path, raw in inputs],
            'result': result,
        }

    @staticmethod
    def digest(raw: bytes) -> str:
        h = hashes.Hash(hashes.SHA256())
        h.update(raw)
        return h.finalize().hex()

    @staticmethod
    def serialize(report: Dict) -> str:
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    # --- blocos do payload ----------------------------------------------

    @staticmethod
    def subspace(space: Subspace) -> Dict[str, Any]:
        return {'dim': space.dim, 'basis': [vector_to_payload(b) for b in space.basis]}

    @staticmethod
    def matrices(items: Sequence[Matrix]) -> List[List[List[str]]]:
        return [matrix_to_payload(m) for m in items]

    @staticmethod
    def verdict(verdict: Verdict, prefix: str = 'e') -> Dict[str, Any]:
        return {
            'ok': verdict.ok,
            'violations': [
                {
                    'axiom': v.axiom,
                    'description': ReportService._get_axiom_description(v.axiom),
                    'witness': [i + 1 for i in v.witness],
                    'label': v.describe(prefix),
                }
                for v in verdict.violations
            ],
        }

    @staticmethod
    def _get_axiom_description(axiom: str) -> str:
        descriptions = {
            'skew': 'Antissimetria do colchete',
            'twist_invertible': 'Twist inversível',
            'twist_morphism': 'Twist é morfismo: phi[x,y] = [phi x, phi y]',
            'hom_jacobi': 'Identidade de Hom-Jacobi',
            'bracket': 'Morfismo preserva o colchete',
            'twist': 'Morfismo comuta com os twists',
            'derivation': 'Regra de Leibniz torcida',
            'twist_compatibility': 'rho(phi x) o beta = beta o rho(x)',
            'bracket_compatibility': 'rho([x,y]) o beta = rho(phi x) rho(y) - rho(phi y) rho(x)',
            'p1': 'phi_h o rho_x = rho_(phi x) o phi_h',
            'p2': 'rho_x é derivação de h',
            'p3': 'phi_h omega(x,y) = omega(phi x, phi y)',
            'p4': '[rho_x, rho_y]_phi - rho_[x,y] = ad_omega(x,y)',
            'p5': 'Identidade cíclica de omega',
            'isom1': 'phi_h o xi = xi o phi_g',
            'isom2': "rho' - rho = ad o xi",
            'isom3': "omega' - omega = variação induzida por xi",
            'ad_twist': 'Ad_phi(ad_x) = ad_(phi x)',
            'bracket_with_inner': '[D, ad_x]_phi = ad_(D x)',
            'der_bracket': 'Der fechado pelo colchete',
            'der_twist': 'Der fechado por Ad_phi',
        }
        return descriptions.get(axiom, axiom)
