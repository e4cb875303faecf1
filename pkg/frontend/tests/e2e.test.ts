// End-to-end against the real Python service: spawns `medgraph serve` on a
// scratch data directory and drives it exactly as the browser UI does —
// through the HTTP API only.

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { ChildProcess, execFileSync, spawn } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { ApiClient } from '../src/api.js';
import { MemoryStorage, OfflineQueue } from '../src/queue.js';
import type { Patient } from '../src/types.js';

const REPO_ROOT = fileURLToPath(new URL('../..', import.meta.url));
const PORT = 18000 + Math.floor(Math.random() * 4000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const api = new ApiClient(BASE);

async function waitForServer(): Promise<void> {
    for (let i = 0; i < 100; i++) {
        try {
            const resp = await fetch(`${BASE}/api/standards`);
            if (resp.ok) return;
        } catch {
            // not up yet
        }
        await new Promise((r) => setTimeout(r, 150));
    }
    throw new Error('service did not come up');
}

beforeAll(async () => {
    const dataDir = mkdtempSync(join(tmpdir(), 'medgraph-e2e-'));
    const env = { ...process.env, MEDGRAPH_DATA_DIR: dataDir };
    execFileSync(
        'python3',
        ['-m', 'medgraph.cli', 'standards', 'add', join(REPO_ROOT, 'tests/data/wfl-girls.csv'),
         '--id', 'wfl-girls', '--indicator', 'weight-for-height', '--sex', 'female',
         '--x-unit', 'length-cm'],
        { env },
    );
    execFileSync('cp', [join(REPO_ROOT, 'tests/data/rations.sample.csv'), join(dataDir, 'rations.csv')]);
    server = spawn('python3', ['-m', 'medgraph.cli', 'serve', '--port', String(PORT)], {
        env,
        stdio: 'ignore',
    });
    await waitForServer();
}, 30000);

afterAll(() => {
    server?.kill();
});

describe('against the live service', () => {
    it('registers a child, records a visit, reads chart + recommendation', async () => {
        const patient = await api.createPatient({
            name: 'Grace', sex: 'female', birth_date: '2026-07-01',
        });
        await api.addVisit(patient.id, {
            id: crypto.randomUUID(),
            date: '2026-07-08',
            measures: { weight_kg: 4.0, height_cm: 45.5, muac_cm: 11.0 },
        });

        const chart = await api.chart(patient.id, 'weight-for-height', 'passport');
        expect(chart.dataset_id).toBe('wfl-girls');
        expect(chart.annotations).toHaveLength(1);
        const [ann] = chart.annotations;
        expect(ann.z_display).not.toBeNull();
        expect(ann.rutf_rations).toBe(1); // 4.0 kg -> first sample band

        const svg = await api.chartSvg(patient.id, 'weight-for-height', 'passport');
        expect(svg.startsWith('<svg')).toBe(true);
        expect(svg).toContain('id="x-tick-labels"');
        expect(svg.match(/class="point"/g)).toHaveLength(1);

        const rec = await api.recommendation(patient.id);
        expect(rec?.program).toBe('OTP');
        expect(rec?.reasons.join(' ')).toContain('MUAC');
    });

    it('hides the recommendation when measures are missing (422 -> null)', async () => {
        const patient = await api.createPatient({
            name: 'NoMeasures', sex: 'female', birth_date: '2026-07-01',
        });
        await api.addVisit(patient.id, {
            id: crypto.randomUUID(),
            date: '2026-07-10',
            measures: { weight_kg: 4.0 },
        });
        expect(await api.recommendation(patient.id)).toBeNull();
    });

    it('drains offline-entered records to the server after reconnect', async () => {
        const storage = new MemoryStorage();
        const queue = new OfflineQueue(storage);
        const offlineApi = new ApiClient(BASE, () => Promise.reject(new TypeError('offline')));

        const patient: Patient = {
            id: crypto.randomUUID(), name: 'Offline Child', sex: 'female', birth_date: '2026-07-01',
        };
        const visit = {
            id: crypto.randomUUID(), date: '2026-07-09',
            measures: { weight_kg: 3.9, height_cm: 45.0, muac_cm: 12.0 },
        };
        // entry while offline: both records queue instead of posting
        expect(await queue.drain(offlineApi)).toMatchObject({ sent: 0 });
        queue.enqueuePatient(patient);
        queue.enqueueVisit(patient.id, visit);
        expect(queue.size).toBe(2);

        // connectivity returns: the queue drains fully, in order
        const result = await queue.drain(api);
        expect(result).toMatchObject({ sent: 2, remaining: 0 });

        const visits = await api.listVisits(patient.id);
        expect(visits).toHaveLength(1);
        expect(visits[0].id).toBe(visit.id);

        // a retry after a lost ack cannot duplicate (idempotent UUIDs)
        queue.enqueueVisit(patient.id, visit);
        await queue.drain(api);
        expect(await api.listVisits(patient.id)).toHaveLength(1);
    });
});
