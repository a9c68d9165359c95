import csv
import dataclasses
import io
import logging

import numpy as np
from rest_framework.parsers import JSONParser

from apps.harness.config import default_quad_nodes
from apps.plancherel.serializers import SpectralFunctionSerializer
from apps.plancherel.transform import forward, inverse, roundtrip_defect
from apps.radial.serializers import RadialFunctionSerializer, write_radial_csv
from ._base import QBallCommand

logger = logging.getLogger('apps.harness')

DIRECTIONS = ('forward', 'inverse')


class Command(QBallCommand):
    help = 'Spherical transform of a radial function (forward) or of spectral samples (inverse), JSON in and out'

    def add_arguments(self, parser):
        parser.add_argument('direction', choices=DIRECTIONS)
        super().add_arguments(parser)
        parser.add_argument('--input', required=True, help='RadialFunction (forward) or SpectralFunction (inverse) JSON')
        parser.add_argument('--check', action='store_true', help='Add the roundtrip defect; exit 1 above tolerance')

    def run(self, config, options):
        with open(options['input'], 'rb') as stream:
            data = JSONParser().parse(stream)
        if not isinstance(data, dict):
            raise ValueError("Input must be a JSON object")

        # the file fixes q and n; flags may only repeat them
        for name in ('q', 'n'):
            given = options.get(name)
            if given is not None and name in data and given != data[name]:
                raise ValueError(f"--{name} {given} contradicts the input file ({name} = {data[name]})")

        if options['direction'] == 'forward':
            return self.forward(config, data, options)
        return self.inverse(config, data, options)

    def forward(self, config, data, options):
        serializer = RadialFunctionSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        f = serializer.build()
        config = dataclasses.replace(
            config,
            q=serializer.validated_data['q'],
            n=f.n,
            quad_nodes=options.get('quad_nodes') or default_quad_nodes(f.n),
        )
        ctx = config.context()
        rule = config.rule(ctx)
        fhat = forward(f, rule, ctx)
        logger.info(f"Forward transform of {len(f)} points, n={f.n}, M={rule.M}")

        output = dict(SpectralFunctionSerializer(SpectralFunctionSerializer.payload(fhat, ctx)).data)
        failed = None
        if options.get('check'):
            defect = roundtrip_defect(f, rule, ctx) if len(f) else 0.0
            output['check'], failed = self.check_block(config, defect)

        if config.output_format == 'csv':
            self.emit(self.spectral_csv(fhat), options)
        else:
            self.emit(self.render_json(output, indent=None), options)
        return failed

    def inverse(self, config, data, options):
        serializer = SpectralFunctionSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        fhat = serializer.build()
        if options.get('quad_nodes') not in (None, fhat.M):
            raise ValueError(f"--quad-nodes {options['quad_nodes']} contradicts the input grid (M = {fhat.M})")
        config = dataclasses.replace(config, q=serializer.validated_data['q'], n=fhat.n, quad_nodes=fhat.M)
        ctx = config.context()
        rule = fhat.rule
        f = inverse(fhat, rule, ctx, config.max_weight)
        logger.info(f"Inverse transform onto |lambda| <= {config.max_weight}, n={fhat.n}, M={rule.M}")

        output = dict(RadialFunctionSerializer(RadialFunctionSerializer.payload(f, ctx)).data)
        failed = None
        if options.get('check'):
            scale = float(np.max(np.abs(fhat.values[fhat.regular]))) or 1.0
            defect = forward(f, rule, ctx).max_abs_difference(fhat) / scale
            output['check'], failed = self.check_block(config, defect)

        if config.output_format == 'csv':
            stream = io.StringIO()
            write_radial_csv(f, ctx, stream)
            self.emit(stream.getvalue(), options)
        else:
            self.emit(self.render_json(output, indent=None), options)
        return failed

    @staticmethod
    def check_block(config, defect):
        tolerance = config.tolerance(1e-6 if config.n == 1 else 1e-5)
        passed = bool(np.isfinite(defect) and defect <= tolerance)
        block = {'roundtrip_defect': float(defect), 'tolerance': tolerance, 'pass': passed}
        if passed:
            return block, None
        logger.warning(f"Roundtrip defect {defect:.3e} exceeds {tolerance:.1e}")
        return block, f"Roundtrip defect {defect:.3e} exceeds tolerance {tolerance:.1e}"

    @staticmethod
    def spectral_csv(fhat) -> str:
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow([f'rho_{j}' for j in range(1, fhat.n + 1)] + ['re', 'im'])
        nodes = fhat.rule.tensor_nodes(fhat.n).reshape(-1, fhat.n)
        for point, value in zip(nodes, fhat.values.reshape(-1)):
            writer.writerow([repr(float(x)) for x in point] + [repr(float(value.real)), repr(float(value.imag))])
        return stream.getvalue()
